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

#include <termios.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "appt/harness.hpp"
#include "appt/service.hpp"

namespace {

std::atomic<bool> g_shutdown{false};

void handle_signal(int) { g_shutdown.store(true); }

// APPT_CONFIG beats the flag so a deployment can pin the path.
std::string resolve_config_path(const std::string& flag_value) {
  if (const char* env = std::getenv("APPT_CONFIG"); env != nullptr && *env) {
    return env;
  }
  return flag_value;
}

std::string prompt_password() {
  std::cerr << "password: " << std::flush;
  termios saved{};
  const bool tty = isatty(STDIN_FILENO) != 0;
  if (tty && tcgetattr(STDIN_FILENO, &saved) == 0) {
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  }
  std::string password;
  std::getline(std::cin, password);
  if (tty) {
    tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    std::cerr << "\n";
  }
  return password;
}

int run_serve(const std::string& config_flag, bool insecure_dev) {
  const std::string config_path = resolve_config_path(config_flag);
  if (config_path.empty()) {
    std::cerr << "serve needs --config or APPT_CONFIG\n";
    return 2;
  }
  const auto config = appt::ServiceConfig::from_file(config_path);
  if (config.token_private_key_path.empty()) {
    std::cerr << "config must name token_private_key_path\n";
    return 1;
  }
  auto keypair =
      appt::crypto::Keypair::from_private_pem_file(config.token_private_key_path);

  const bool tls =
      !config.tls_cert_path.empty() && !config.tls_key_path.empty();
  if (!tls && !insecure_dev) {
    std::cerr << "no TLS material configured; refusing a plaintext listener "
                 "without --insecure-dev\n";
    return 1;
  }

  appt::App app(config, std::move(keypair),
                std::make_shared<appt::SystemClock>(),
                std::make_shared<appt::crypto::SystemRandom>());

  const auto [host, port] = config.listen_host_port();
  appt::HttpListener::Options options;
  options.host = host;
  options.port = port;
  options.tls = tls;
  options.cert_path = config.tls_cert_path;
  options.key_path = config.tls_key_path;
  options.trusted_proxy = config.trusted_proxy;

  appt::HttpListener listener(app, options);
  if (!listener.start()) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on " << (tls ? "https://" : "http://") << host << ":"
            << listener.port() << (tls ? "" : "  (insecure dev mode)")
            << std::endl;

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_shutdown.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }
  listener.stop();
  return 0;
}

int run_keygen(int bits, const std::string& out_dir) {
  const auto keypair = appt::crypto::Keypair::generate(bits);
  std::filesystem::create_directories(out_dir);
  const auto private_path =
      (std::filesystem::path(out_dir) / "token_private.pem").string();
  const auto public_path =
      (std::filesystem::path(out_dir) / "token_public.pem").string();
  {
    std::ofstream out(private_path);
    out << keypair.private_pem();
  }
  std::filesystem::permissions(private_path,
                               std::filesystem::perms::owner_read |
                                   std::filesystem::perms::owner_write,
                               std::filesystem::perm_options::replace);
  {
    std::ofstream out(public_path);
    out << keypair.public_pem();
  }
  std::cout << private_path << "\n" << public_path << "\n";
  return 0;
}

int run_user_add(const std::string& config_flag, const std::string& username,
                 const std::string& mobile, const std::string& email) {
  const std::string config_path = resolve_config_path(config_flag);
  if (config_path.empty()) {
    std::cerr << "user add needs --config or APPT_CONFIG\n";
    return 2;
  }
  const auto config = appt::ServiceConfig::from_file(config_path);
  if (config.snapshot_path.empty()) {
    std::cerr << "config must name snapshot_path so the user can persist\n";
    return 1;
  }

  const std::string password = prompt_password();
  if (password.empty()) {
    std::cerr << "empty password rejected\n";
    return 1;
  }

  appt::crypto::SystemRandom rng;
  appt::UserRecord user;
  user.username = username;
  user.permanent_credential_hash = appt::crypto::salted_hash(password, rng);
  user.mobile = mobile;
  user.email = email;

  appt::Store store;
  store.load_snapshot(config.snapshot_path);
  store.upsert_user(user);
  store.save_snapshot(config.snapshot_path);
  std::cout << "stored " << username << " (" << store.user_count()
            << " users)\n";
  return 0;
}

int run_scenario_list() {
  for (const auto& info : appt::harness::list_scenarios()) {
    std::cout << info.name << "  -  " << info.description << "\n";
  }
  return 0;
}

int run_scenario(const std::string& name, std::uint64_t seed, bool over_http,
                 bool as_json) {
  appt::harness::RunOptions options;
  options.over_http = over_http;
  const auto report = appt::harness::run_scenario(name, seed, options);
  if (as_json) {
    std::cout << appt::harness::to_json(report).dump(2) << "\n";
  } else {
    std::cout << appt::harness::render_text(report);
  }
  const bool ok = name == "happy-path"
                      ? report.legit_user_outcome == "granted"
                      : report.verdict == appt::harness::Verdict::AttackBlocked;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"APPT authentication gateway: one-time passwords with "
               "machine-bound encrypted tokens"};
  cli.require_subcommand(1);

  // serve
  auto* serve = cli.add_subcommand("serve", "run the HTTP service");
  std::string serve_config;
  bool insecure_dev = false;
  serve->add_option("--config", serve_config, "path to the JSON config");
  serve->add_flag("--insecure-dev", insecure_dev,
                  "allow a plaintext listener (login will be denied "
                  "InsecureTransport)");

  // keygen
  auto* keygen = cli.add_subcommand("keygen", "generate the token keypair");
  int bits = 2048;
  std::string out_dir;
  keygen->add_option("--bits", bits, "RSA key size")->capture_default_str();
  keygen->add_option("--out", out_dir, "output directory")->required();

  // user add
  auto* user = cli.add_subcommand("user", "manage provisioned users");
  user->require_subcommand(1);
  auto* user_add = user->add_subcommand("add", "provision a user");
  std::string add_username, add_mobile, add_email, user_config;
  user_add->add_option("username", add_username, "login name")->required();
  user_add->add_option("--mobile", add_mobile, "mobile number (digits)")
      ->required();
  user_add->add_option("--email", add_email, "email address")->required();
  user_add->add_option("--config", user_config, "path to the JSON config");

  // scenario
  auto* scenario = cli.add_subcommand("scenario", "attack scenario harness");
  scenario->require_subcommand(1);
  auto* scenario_list = scenario->add_subcommand("list", "list scenarios");
  auto* scenario_run = scenario->add_subcommand("run", "run one scenario");
  std::string scenario_name;
  std::uint64_t seed = 1;
  bool over_http = false;
  bool as_json = false;
  scenario_run->add_option("name", scenario_name, "scenario name")->required();
  scenario_run->add_option("--seed", seed, "randomness seed")
      ->capture_default_str();
  scenario_run->add_flag("--over-http", over_http,
                         "replay through loopback listeners");
  scenario_run->add_flag("--json", as_json, "emit the report as JSON");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (serve->parsed()) return run_serve(serve_config, insecure_dev);
    if (keygen->parsed()) return run_keygen(bits, out_dir);
    if (user_add->parsed()) {
      return run_user_add(user_config, add_username, add_mobile, add_email);
    }
    if (scenario_list->parsed()) return run_scenario_list();
    if (scenario_run->parsed()) {
      return run_scenario(scenario_name, seed, over_http, as_json);
    }
  } catch (const appt::Error& e) {
    std::cerr << "error [" << appt::to_string(e.code()) << "]: " << e.what()
              << "\n";
    return e.code() == appt::ErrorCode::UnknownScenario ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
