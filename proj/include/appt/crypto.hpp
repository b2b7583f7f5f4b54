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

#ifndef APPT_CRYPTO_HPP
#define APPT_CRYPTO_HPP

#include <cstddef>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>

#include "appt/domain.hpp"

using EVP_PKEY = struct evp_pkey_st;

namespace appt::crypto {

/// Source of random bytes. The system implementation draws from the
/// OS CSPRNG; the seeded one exists so harness runs are reproducible.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic stream for tests and scenario replay. Internally
/// locked so concurrent callers interleave safely (order then depends
/// on scheduling, which single-threaded scenario scripts avoid).
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mutex mu_;
  std::mt19937_64 engine_;
};

Bytes random_bytes(RandomSource& rng, std::size_t n);

// Unbiased integer in [0, n); rejection-sampled from the source.
std::size_t uniform_index(RandomSource& rng, std::size_t n);

// 128 random bits rendered 8-4-4-4-12 as lowercase hex, e.g.
// "39369a0d-975e-44c1-9b33-06cf72a1a4e2".
std::string random_token_name(RandomSource& rng);

// 128 random bits as 32 lowercase hex digits.
std::string random_session_id(RandomSource& rng);

/// RSA key material. Encryption needs only the public part; decryption
/// requires the private part. Immutable after creation and safe to
/// share across threads.
class Keypair {
 public:
  // Fresh key of the given size. Throws Error{KeyTooSmall} below the
  // 2048-bit floor.
  static Keypair generate(int bits);

  static Keypair from_private_pem(const std::string& pem);
  static Keypair from_public_pem(const std::string& pem);
  static Keypair from_private_pem_file(const std::string& path);
  static Keypair from_public_pem_file(const std::string& path);

  std::string public_pem() const;
  std::string private_pem() const;  // throws Error{NoPrivateKey}

  // Public-only handle to the same key.
  Keypair public_part() const;

  bool has_private() const { return has_private_; }

  // Modulus length in bytes (k). Ciphertexts are exactly k bytes and
  // PKCS#1 v1.5 plaintexts are capped at k - 11.
  std::size_t modulus_bytes() const;

  EVP_PKEY* raw() const { return key_.get(); }

 private:
  Keypair(std::shared_ptr<EVP_PKEY> key, bool has_private)
      : key_(std::move(key)), has_private_(has_private) {}

  std::shared_ptr<EVP_PKEY> key_;
  bool has_private_ = false;
};

// Canonical claims encoding: UTF-8 lines
//   v=APPT1, tn=..., un=..., em=..., ip=..., ia=..., ex=...
// joined by '\n' in exactly that order, no trailing newline.
// Throws Error{DelimiterInField} if any field contains '\n'.
Bytes encode_claims(const TokenClaims& claims);

// Exact inverse of encode_claims. Rejects a wrong version tag, wrong
// line count, wrong key order, and non-integer instants with
// Error{MalformedClaims}.
TokenClaims decode_claims(std::span<const std::uint8_t> bytes);

// PKCS#1 v1.5 encryption of the canonical encoding under the public
// key. Throws Error{PayloadTooLarge} when the encoding exceeds k - 11.
EncryptedToken encrypt_token(const TokenClaims& claims, const Keypair& key);

// Decrypts and decodes. Throws Error{NoPrivateKey} for a public-only
// handle, Error{DecryptFailed} on ciphertext/padding failure, and
// propagates Error{MalformedClaims} from decoding.
TokenClaims decrypt_token(const EncryptedToken& token, const Keypair& key);

// Salted credential digest: 16-byte salt || PBKDF2-HMAC-SHA256. The
// blob is self-describing, verify recomputes and compares in constant
// time.
Bytes salted_hash(std::string_view secret, RandomSource& rng);
bool verify_salted_hash(std::string_view secret, const Bytes& blob);

/// Throwaway TLS material for loopback listeners in tests and the
/// scenario harness.
struct SelfSignedCert {
  std::string cert_pem;
  std::string key_pem;
};

SelfSignedCert make_self_signed_cert(const std::string& common_name);

}  // namespace appt::crypto

#endif  // APPT_CRYPTO_HPP
