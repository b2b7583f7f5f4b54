// Copyright 2026 The APPT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "appt/crypto.hpp"

#include <openssl/bio.h>
#include <openssl/crypto.h>
#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/pem.h>
#include <openssl/rand.h>
#include <openssl/rsa.h>
#include <openssl/x509.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "appt/base64.hpp"

namespace appt::crypto {

namespace {

// PKCS#1 v1.5 padding overhead: 0x00 0x02, >= 8 nonzero pad bytes, 0x00.
constexpr std::size_t kPkcs1Overhead = 11;
constexpr int kMinKeyBits = 2048;
constexpr std::size_t kSaltLen = 16;
constexpr std::size_t kDigestLen = 32;
constexpr int kPbkdf2Iterations = 10000;

struct BioFree {
  void operator()(BIO* bio) const { BIO_free(bio); }
};
using BioPtr = std::unique_ptr<BIO, BioFree>;

struct CtxFree {
  void operator()(EVP_PKEY_CTX* ctx) const { EVP_PKEY_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_PKEY_CTX, CtxFree>;

std::shared_ptr<EVP_PKEY> wrap_pkey(EVP_PKEY* raw) {
  return std::shared_ptr<EVP_PKEY>(raw, EVP_PKEY_free);
}

[[noreturn]] void throw_openssl(ErrorCode code, const std::string& what) {
  char buf[256] = {0};
  if (const unsigned long err = ERR_get_error(); err != 0) {
    ERR_error_string_n(err, buf, sizeof(buf));
  }
  ERR_clear_error();
  throw Error(code, what + (buf[0] ? std::string(": ") + buf : std::string()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string hex_digits(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

void append_field(std::string& out, std::string_view key,
                  std::string_view value) {
  if (value.find('\n') != std::string_view::npos) {
    throw Error(ErrorCode::DelimiterInField,
                std::string("claims field '") + std::string(key) +
                    "' contains the line delimiter");
  }
  if (!out.empty()) out.push_back('\n');
  out.append(key);
  out.push_back('=');
  out.append(value);
}

// Strict signed-decimal parse: the whole string must be consumed.
Instant parse_instant(std::string_view text) {
  Instant value = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorCode::MalformedClaims,
                "instant is not a decimal integer: " + std::string(text));
  }
  return value;
}

std::string_view expect_line(std::string_view line, std::string_view key,
                             const char* what) {
  if (line.size() < key.size() + 1 || line.substr(0, key.size()) != key ||
      line[key.size()] != '=') {
    throw Error(ErrorCode::MalformedClaims,
                std::string("expected '") + std::string(key) + "=' line for " +
                    what);
  }
  return line.substr(key.size() + 1);
}

}  // namespace

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw_openssl(ErrorCode::IoError, "RAND_bytes failed");
  }
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::lock_guard lock(mu_);
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word & 0xff);
      word >>= 8;
    }
  }
}

Bytes random_bytes(RandomSource& rng, std::size_t n) {
  Bytes out(n);
  rng.fill(out);
  return out;
}

std::size_t uniform_index(RandomSource& rng, std::size_t n) {
  if (n == 0) {
    throw std::logic_error("uniform_index over empty range");
  }
  if (n == 1) return 0;
  // Rejection sampling over a 32-bit draw avoids modulo bias.
  const std::uint64_t span = 1ull << 32;
  const std::uint64_t limit = span - span % n;
  std::uint8_t buf[4];
  for (;;) {
    rng.fill(buf);
    const std::uint64_t v = (std::uint64_t{buf[0]} << 24) |
                            (std::uint64_t{buf[1]} << 16) |
                            (std::uint64_t{buf[2]} << 8) | buf[3];
    if (v < limit) return static_cast<std::size_t>(v % n);
  }
}

std::string random_token_name(RandomSource& rng) {
  const Bytes raw = random_bytes(rng, 16);
  const std::string hex = hex_digits(raw);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) +
         "-" + hex.substr(16, 4) + "-" + hex.substr(20, 12);
}

std::string random_session_id(RandomSource& rng) {
  return hex_digits(random_bytes(rng, 16));
}

Keypair Keypair::generate(int bits) {
  if (bits < kMinKeyBits) {
    throw Error(ErrorCode::KeyTooSmall,
                "key must be at least 2048 bits, got " + std::to_string(bits));
  }
  CtxPtr ctx(EVP_PKEY_CTX_new_from_name(nullptr, "RSA", nullptr));
  if (!ctx || EVP_PKEY_keygen_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_rsa_keygen_bits(ctx.get(), bits) <= 0) {
    throw_openssl(ErrorCode::IoError, "RSA keygen setup failed");
  }
  EVP_PKEY* raw = nullptr;
  if (EVP_PKEY_keygen(ctx.get(), &raw) <= 0) {
    throw_openssl(ErrorCode::IoError, "RSA keygen failed");
  }
  return Keypair(wrap_pkey(raw), /*has_private=*/true);
}

Keypair Keypair::from_private_pem(const std::string& pem) {
  BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
  EVP_PKEY* raw =
      PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr);
  if (raw == nullptr) {
    throw_openssl(ErrorCode::IoError, "cannot parse private key PEM");
  }
  return Keypair(wrap_pkey(raw), /*has_private=*/true);
}

Keypair Keypair::from_public_pem(const std::string& pem) {
  BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
  EVP_PKEY* raw = PEM_read_bio_PUBKEY(bio.get(), nullptr, nullptr, nullptr);
  if (raw == nullptr) {
    throw_openssl(ErrorCode::IoError, "cannot parse public key PEM");
  }
  return Keypair(wrap_pkey(raw), /*has_private=*/false);
}

Keypair Keypair::from_private_pem_file(const std::string& path) {
  return from_private_pem(read_file(path));
}

Keypair Keypair::from_public_pem_file(const std::string& path) {
  return from_public_pem(read_file(path));
}

std::string Keypair::public_pem() const {
  BioPtr bio(BIO_new(BIO_s_mem()));
  if (!bio || PEM_write_bio_PUBKEY(bio.get(), key_.get()) != 1) {
    throw_openssl(ErrorCode::IoError, "cannot serialize public key");
  }
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio.get(), &data);
  return std::string(data, static_cast<std::size_t>(len));
}

std::string Keypair::private_pem() const {
  if (!has_private_) {
    throw Error(ErrorCode::NoPrivateKey,
                "key handle does not contain a private key");
  }
  BioPtr bio(BIO_new(BIO_s_mem()));
  if (!bio || PEM_write_bio_PrivateKey(bio.get(), key_.get(), nullptr, nullptr,
                                       0, nullptr, nullptr) != 1) {
    throw_openssl(ErrorCode::IoError, "cannot serialize private key");
  }
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio.get(), &data);
  return std::string(data, static_cast<std::size_t>(len));
}

Keypair Keypair::public_part() const { return from_public_pem(public_pem()); }

std::size_t Keypair::modulus_bytes() const {
  const int size = EVP_PKEY_get_size(key_.get());
  if (size <= 0) {
    throw Error(ErrorCode::IoError, "cannot determine key size");
  }
  return static_cast<std::size_t>(size);
}

Bytes encode_claims(const TokenClaims& claims) {
  std::string text;
  append_field(text, "v", kClaimsVersion);
  append_field(text, "tn", claims.token_name);
  append_field(text, "un", claims.host_username);
  append_field(text, "em", claims.email);
  append_field(text, "ip", claims.host_ip);
  append_field(text, "ia", std::to_string(claims.issued_at));
  append_field(text, "ex", std::to_string(claims.expires_at));
  return Bytes(text.begin(), text.end());
}

TokenClaims decode_claims(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) {
    throw Error(ErrorCode::MalformedClaims, "empty claims payload");
  }
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()),
                              bytes.size());
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      lines.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (lines.size() != 7) {
    throw Error(ErrorCode::MalformedClaims,
                "expected 7 lines, got " + std::to_string(lines.size()));
  }
  if (const auto version = expect_line(lines[0], "v", "version");
      version != kClaimsVersion) {
    throw Error(ErrorCode::MalformedClaims,
                "unsupported version tag: " + std::string(version));
  }
  TokenClaims claims;
  claims.token_name = std::string(expect_line(lines[1], "tn", "token name"));
  claims.host_username = std::string(expect_line(lines[2], "un", "username"));
  claims.email = std::string(expect_line(lines[3], "em", "email"));
  claims.host_ip = std::string(expect_line(lines[4], "ip", "host IP"));
  claims.issued_at = parse_instant(expect_line(lines[5], "ia", "issue time"));
  claims.expires_at = parse_instant(expect_line(lines[6], "ex", "expiry time"));
  return claims;
}

EncryptedToken encrypt_token(const TokenClaims& claims, const Keypair& key) {
  const Bytes plain = encode_claims(claims);
  const std::size_t k = key.modulus_bytes();
  if (plain.size() > k - kPkcs1Overhead) {
    throw Error(ErrorCode::PayloadTooLarge,
                "canonical claims are " + std::to_string(plain.size()) +
                    " bytes; limit is " + std::to_string(k - kPkcs1Overhead));
  }
  CtxPtr ctx(EVP_PKEY_CTX_new(key.raw(), nullptr));
  if (!ctx || EVP_PKEY_encrypt_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_PADDING) <= 0) {
    throw_openssl(ErrorCode::IoError, "encrypt setup failed");
  }
  std::size_t out_len = k;
  Bytes ciphertext(k);
  if (EVP_PKEY_encrypt(ctx.get(), ciphertext.data(), &out_len, plain.data(),
                       plain.size()) <= 0) {
    throw_openssl(ErrorCode::IoError, "encrypt failed");
  }
  ciphertext.resize(out_len);
  return EncryptedToken::from_ciphertext(std::move(ciphertext));
}

TokenClaims decrypt_token(const EncryptedToken& token, const Keypair& key) {
  if (!key.has_private()) {
    throw Error(ErrorCode::NoPrivateKey,
                "key handle does not contain a private key");
  }
  if (token.ciphertext.size() != key.modulus_bytes()) {
    throw Error(ErrorCode::DecryptFailed,
                "ciphertext length does not match the key modulus");
  }
  CtxPtr ctx(EVP_PKEY_CTX_new(key.raw(), nullptr));
  if (!ctx || EVP_PKEY_decrypt_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_PADDING) <= 0) {
    throw_openssl(ErrorCode::IoError, "decrypt setup failed");
  }
  std::size_t out_len = 0;
  if (EVP_PKEY_decrypt(ctx.get(), nullptr, &out_len, token.ciphertext.data(),
                       token.ciphertext.size()) <= 0) {
    throw_openssl(ErrorCode::DecryptFailed, "decrypt failed");
  }
  Bytes plain(out_len);
  if (EVP_PKEY_decrypt(ctx.get(), plain.data(), &out_len,
                       token.ciphertext.data(),
                       token.ciphertext.size()) <= 0) {
    throw_openssl(ErrorCode::DecryptFailed, "decrypt failed");
  }
  plain.resize(out_len);
  return decode_claims(plain);
}

Bytes salted_hash(std::string_view secret, RandomSource& rng) {
  Bytes blob = random_bytes(rng, kSaltLen);
  blob.resize(kSaltLen + kDigestLen);
  if (PKCS5_PBKDF2_HMAC(secret.data(), static_cast<int>(secret.size()),
                        blob.data(), kSaltLen, kPbkdf2Iterations, EVP_sha256(),
                        kDigestLen, blob.data() + kSaltLen) != 1) {
    throw_openssl(ErrorCode::IoError, "PBKDF2 failed");
  }
  return blob;
}

bool verify_salted_hash(std::string_view secret, const Bytes& blob) {
  if (blob.size() != kSaltLen + kDigestLen) return false;
  std::uint8_t digest[kDigestLen];
  if (PKCS5_PBKDF2_HMAC(secret.data(), static_cast<int>(secret.size()),
                        blob.data(), kSaltLen, kPbkdf2Iterations, EVP_sha256(),
                        kDigestLen, digest) != 1) {
    return false;
  }
  return CRYPTO_memcmp(digest, blob.data() + kSaltLen, kDigestLen) == 0;
}

SelfSignedCert make_self_signed_cert(const std::string& common_name) {
  const Keypair key = Keypair::generate(2048);

  using X509Ptr = std::unique_ptr<X509, decltype(&X509_free)>;
  X509Ptr cert(X509_new(), X509_free);
  if (!cert) throw_openssl(ErrorCode::IoError, "X509_new failed");

  ASN1_INTEGER_set(X509_get_serialNumber(cert.get()), 1);
  X509_gmtime_adj(X509_getm_notBefore(cert.get()), 0);
  X509_gmtime_adj(X509_getm_notAfter(cert.get()), 60L * 60 * 24 * 365);
  X509_set_pubkey(cert.get(), key.raw());

  X509_NAME* name = X509_get_subject_name(cert.get());
  X509_NAME_add_entry_by_txt(
      name, "CN", MBSTRING_ASC,
      reinterpret_cast<const unsigned char*>(common_name.c_str()), -1, -1, 0);
  X509_set_issuer_name(cert.get(), name);

  if (X509_sign(cert.get(), key.raw(), EVP_sha256()) == 0) {
    throw_openssl(ErrorCode::IoError, "X509_sign failed");
  }

  BioPtr bio(BIO_new(BIO_s_mem()));
  if (!bio || PEM_write_bio_X509(bio.get(), cert.get()) != 1) {
    throw_openssl(ErrorCode::IoError, "cannot serialize certificate");
  }
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio.get(), &data);

  return SelfSignedCert{std::string(data, static_cast<std::size_t>(len)),
                        key.private_pem()};
}

}  // namespace appt::crypto
