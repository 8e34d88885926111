// galelab: command-line front end for block entropy estimation, gambler
// construction, capital trajectories and the gale verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "galelab/construct.hpp"
#include "galelab/dimension.hpp"
#include "galelab/gambler.hpp"
#include "galelab/seqgen.hpp"
#include "galelab/verify.hpp"

#ifndef GALELAB_VERSION
#define GALELAB_VERSION "0.1.0"
#endif

namespace {

using galelab::Error;
using nlohmann::json;

// An input problem attributable to one flag; reported as "<flag>: <what>" with exit 2.
struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(galelab::ErrorCode::file_not_readable, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("--out", "cannot write " + path);
  out << body;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Where the symbols come from: an inline generator or a glyph file.
struct InputOptions {
  std::string gen;
  std::string file;
  std::string alphabet = "01";
  bool keep_ws = false;
  std::uint64_t n = 0;

  void attach(CLI::App* cmd, std::uint64_t default_n) {
    n = default_n;
    auto* g = cmd->add_option("--gen", gen, "inline generator, e.g. periodic:01, bernoulli:1/4:seed42");
    auto* f = cmd->add_option("--file", file, "glyph file, one symbol per character");
    g->excludes(f);
    cmd->add_option("--alphabet", alphabet, "glyphs of the file alphabet")->capture_default_str();
    cmd->add_flag("--keep-ws", keep_ws, "treat whitespace in --file as symbols (error unless in the alphabet)");
    cmd->add_option("--n", n, "number of symbols to read (file: whole file when omitted)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  galelab::GeneratorConfig config() const {
    if (gen.empty() && file.empty()) throw UsageError("--gen/--file", "an input source is required");
    galelab::GeneratorConfig cfg;
    if (!file.empty()) {
      cfg.kind = galelab::GeneratorKind::file;
      cfg.path = file;
    } else {
      try {
        cfg = galelab::parse_generator(gen);
      } catch (const Error& e) {
        throw UsageError("--gen", e.what());
      }
    }
    if (cfg.kind == galelab::GeneratorKind::file) {
      cfg.alphabet = alphabet;
      cfg.skip_whitespace = !keep_ws;
    }
    return cfg;
  }

  bool from_file() const { return config().kind == galelab::GeneratorKind::file; }

  // Whole input as a word; generators stop at --n, files at EOF or --n.
  galelab::Word load(bool n_given) const {
    const auto cfg = config();
    auto stream = open(cfg);
    const auto limit = cfg.kind == galelab::GeneratorKind::file && !n_given ? std::numeric_limits<std::uint64_t>::max() : n;
    try {
      return galelab::take(*stream, limit);
    } catch (const Error& e) {
      throw UsageError(cfg.kind == galelab::GeneratorKind::file ? "--file" : "--gen", e.what());
    }
  }

  static std::unique_ptr<galelab::SymbolStream> open(const galelab::GeneratorConfig& cfg) {
    try {
      return galelab::generate(cfg);
    } catch (const Error& e) {
      throw UsageError(cfg.kind == galelab::GeneratorKind::file ? "--file" : "--gen", e.what());
    }
  }

  json describe(const galelab::Word& data) const {
    const auto cfg = config();
    json j = galelab::generator_metadata(cfg);
    j["symbols"] = data.size();
    if (cfg.kind == galelab::GeneratorKind::file) {
      j["sha256"] = sha256_hex(read_file(cfg.path));
    } else {
      j["sha256"] = sha256_hex(j.dump());
    }
    return j;
  }
};

struct RunContext {
  std::string command;
  json params = json::object();
  json inputs = json::array();
  std::vector<std::string> outputs;

  std::string manifest_path(const std::string& out) const { return out + ".manifest.json"; }

  void write_manifest(const std::string& out) const {
    json m{{"command", command},
           {"parameters", params},
           {"inputs", inputs},
           {"outputs", outputs},
           {"library_version", GALELAB_VERSION},
           {"timestamp", utc_timestamp()}};
    write_file(manifest_path(out), m.dump(2) + "\n");
  }
};

std::string trace_csv(const galelab::CapitalTrace& trace) {
  std::ostringstream out;
  out << "prefix_len,log2_capital\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trace.prefix_lengths.size(); ++i)
    out << trace.prefix_lengths[i] << ',' << trace.log2_capital[i] << '\n';
  return out.str();
}

galelab::CheckpointSchedule parse_checkpoints(const std::string& text) {
  galelab::CheckpointSchedule schedule;
  if (text.empty()) return schedule;
  const auto colon = text.find(':');
  try {
    schedule.first = std::stoull(text.substr(0, colon));
    if (colon != std::string::npos) schedule.ratio = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--checkpoints", "expected FIRST[:RATIO], got \"" + text + "\"");
  }
  if (schedule.first == 0 || !(schedule.ratio > 1.0))
    throw UsageError("--checkpoints", "need FIRST ≥ 1 and RATIO > 1");
  return schedule;
}

galelab::Rational parse_rational_flag(const std::string& flag, const std::string& text) {
  try {
    return galelab::parse_rational(text);
  } catch (const Error& e) {
    throw UsageError(flag, e.what());
  }
}

galelab::BlockMode parse_mode_flag(const std::string& text) {
  try {
    return galelab::parse_block_mode(text);
  } catch (const Error& e) {
    throw UsageError("--mode", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"galelab: finite-state gamblers, gales and block entropy rates"};
  app.set_version_flag("--version", GALELAB_VERSION);
  app.require_subcommand(1);

  // entropy
  auto* entropy = app.add_subcommand("entropy", "block entropy profile and rate estimate");
  InputOptions e_in;
  e_in.attach(entropy, 1000000);
  std::string e_mode = "disjoint", e_checkpoints, e_out;
  std::size_t e_lmax = 4;
  entropy->add_option("--mode", e_mode, "disjoint or sliding")->capture_default_str();
  entropy->add_option("--lmax", e_lmax, "largest block length")
      ->check(CLI::Range(std::size_t{1}, galelab::max_block_length))
      ->capture_default_str();
  entropy->add_option("--checkpoints", e_checkpoints, "checkpoint schedule FIRST[:RATIO] (default 1000:1.5)");
  entropy->add_option("--out", e_out, "output prefix: writes PREFIX.json and PREFIX_l<ℓ>.csv");

  // construct
  auto* construct = app.add_subcommand("construct", "build a block gambler from empirical frequencies");
  InputOptions c_in;
  c_in.attach(construct, 1000000);
  std::string c_mode = "disjoint", c_floor, c_epsilon = "1/10", c_out;
  std::size_t c_l = 2;
  construct->add_option("--l", c_l, "block length")->check(CLI::Range(std::size_t{1}, galelab::max_block_length))->capture_default_str();
  construct->add_option("--mode", c_mode, "disjoint or sliding")->capture_default_str();
  construct->add_option("--floor", c_floor, "smoothing floor (default 1/(100·σ^ℓ))");
  construct->add_option("--epsilon", c_epsilon, "max log2 distortion of kept blocks")->capture_default_str();
  construct->add_option("--out", c_out, "gambler spec JSON path")->required();

  // gamble
  auto* gamble = app.add_subcommand("gamble", "run a gambler spec and classify its capital growth");
  InputOptions g_in;
  g_in.attach(gamble, 100000);
  std::string g_spec, g_s = "1", g_out;
  std::uint64_t g_stride = 0;
  gamble->add_option("--spec", g_spec, "gambler spec JSON")->required();
  gamble->add_option("--s", g_s, "gale parameter s ≥ 0")->capture_default_str();
  gamble->add_option("--stride", g_stride, "checkpoint spacing (default n/50)");
  gamble->add_option("--out", g_out, "trajectory CSV path");

  // verify
  auto* verify = app.add_subcommand("verify", "randomized and exhaustive property suites");
  std::string v_suite, v_spec, v_s = "1", v_out;
  std::uint64_t v_trials = 100, v_seed = 1;
  std::size_t v_depth = 6;
  verify->add_option("--suite", v_suite, "gale|root|kraft|cover|construct")
      ->required()
      ->check(CLI::IsMember({"gale", "root", "kraft", "cover", "construct"}));
  verify->add_option("--trials", v_trials, "random instances")->capture_default_str();
  verify->add_option("--seed", v_seed, "RNG seed")->capture_default_str();
  verify->add_option("--spec", v_spec, "gale suite: check this spec instead of random gamblers");
  verify->add_option("--s", v_s, "gale suite with --spec: gale parameter")->capture_default_str();
  verify->add_option("--depth", v_depth, "gale suite: word depth")->capture_default_str();
  verify->add_option("--out", v_out, "report JSON path");

  // equiv
  auto* equiv = app.add_subcommand("equiv", "disjoint vs sliding entropy rate comparison");
  InputOptions q_in;
  q_in.attach(equiv, 1000000);
  std::size_t q_lmax = 6;
  std::string q_checkpoints, q_out;
  equiv->add_option("--lmax", q_lmax, "largest block length")
      ->check(CLI::Range(std::size_t{1}, galelab::max_block_length))
      ->capture_default_str();
  equiv->add_option("--checkpoints", q_checkpoints, "checkpoint schedule FIRST[:RATIO]");
  equiv->add_option("--out", q_out, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunContext ctx;
  ctx.params = json::object();
  try {
    if (*entropy) {
      ctx.command = "entropy";
      const auto mode = parse_mode_flag(e_mode);
      const auto schedule = parse_checkpoints(e_checkpoints);
      const auto data = e_in.load(entropy->count("--n") > 0);
      galelab::WordStream stream(data);
      const auto est = galelab::estimate_fs_dimension(stream, e_lmax, mode, data.size(), schedule);
      ctx.params = {{"mode", e_mode}, {"lmax", e_lmax}, {"n", data.size()},
                    {"checkpoints", {{"first", schedule.first}, {"ratio", schedule.ratio}}}};
      ctx.inputs.push_back(e_in.describe(data));
      auto report = galelab::to_json(est);
      if (!e_out.empty()) {
        report["manifest"] = ctx.manifest_path(e_out);
        for (const auto& r : est.reports) {
          const auto csv = e_out + "_l" + std::to_string(r.block_length) + ".csv";
          write_file(csv, galelab::to_csv(r));
          ctx.outputs.push_back(csv);
        }
        write_file(e_out + ".json", report.dump(2) + "\n");
        ctx.outputs.push_back(e_out + ".json");
        ctx.write_manifest(e_out);
      }
      json summary{{"mode", e_mode}, {"n_used", est.n_used}, {"estimate", est.estimate}};
      for (const auto& [ell, h] : est.per_length) summary["per_length"][std::to_string(ell)] = h;
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*construct) {
      ctx.command = "construct";
      const auto mode = parse_mode_flag(c_mode);
      const auto data = c_in.load(construct->count("--n") > 0);
      const auto sigma = data.alphabet().size();
      auto policy = galelab::default_smoothing(sigma, c_l);
      if (!c_floor.empty()) {
        policy.floor = parse_rational_flag("--floor", c_floor);
        if (sgn(policy.floor) <= 0) throw UsageError("--floor", "must be positive; smoothing is mandatory");
      }
      policy.epsilon_prime = parse_rational_flag("--epsilon", c_epsilon);
      if (sgn(policy.epsilon_prime) <= 0) throw UsageError("--epsilon", "must be positive");
      galelab::WordStream stream(data);
      const auto empirical = galelab::empirical_block_distribution(stream, c_l, mode, data.size());
      galelab::Distribution dist = [&] {
        try {
          return galelab::rationalize_distribution(empirical, policy);
        } catch (const Error& e) {
          throw UsageError("--floor", e.what());
        }
      }();
      auto spec = mode == galelab::BlockMode::disjoint ? galelab::build_disjoint_gambler(dist)
                                                       : galelab::build_sliding_gambler(dist);
      ctx.params = {{"l", c_l}, {"mode", c_mode}, {"floor", galelab::to_string(policy.floor)},
                    {"epsilon", galelab::to_string(policy.epsilon_prime)}, {"n", data.size()}};
      ctx.inputs.push_back(c_in.describe(data));
      spec.provenance["manifest"] = ctx.manifest_path(c_out);
      galelab::save_gambler(spec, c_out);
      ctx.outputs.push_back(c_out);
      ctx.write_manifest(c_out);
      std::cout << json{{"spec", c_out}, {"states", spec.state_count()}, {"k", spec.k()}}.dump(2) << "\n";
      return 0;
    }

    if (*gamble) {
      ctx.command = "gamble";
      const auto s = parse_rational_flag("--s", g_s);
      if (sgn(s) < 0) throw UsageError("--s", "must be ≥ 0");
      const auto spec = [&] {
        try {
          return galelab::load_gambler(g_spec);
        } catch (const Error& e) {
          throw UsageError("--spec", e.what());
        }
      }();
      const auto data = g_in.load(gamble->count("--n") > 0);
      if (!(data.alphabet() == spec.alphabet()))
        throw UsageError("--spec", "spec alphabet does not match the input alphabet");
      const auto stride = g_stride > 0 ? g_stride : std::max<std::uint64_t>(1, data.size() / 50);
      const auto trace = galelab::run_log(spec, s.get_d(), data.symbols(), stride);
      const auto report = galelab::success_diagnostic(trace, s.get_d());
      ctx.params = {{"spec", g_spec}, {"s", galelab::to_string(s)}, {"n", data.size()}, {"stride", stride}};
      ctx.inputs.push_back(g_in.describe(data));
      ctx.inputs.push_back({{"spec", g_spec}, {"sha256", sha256_hex(read_file(g_spec))}});
      auto out = galelab::to_json(report);
      if (!g_out.empty()) {
        write_file(g_out, trace_csv(trace));
        ctx.outputs.push_back(g_out);
        ctx.write_manifest(g_out);
        out["trajectory"] = g_out;
        out["manifest"] = ctx.manifest_path(g_out);
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*verify) {
      ctx.command = "verify";
      galelab::SuiteReport report;
      if (!v_spec.empty()) {
        if (v_suite != "gale") throw UsageError("--spec", "only the gale suite checks a given spec");
        const auto s = parse_rational_flag("--s", v_s);
        if (sgn(s) < 0) throw UsageError("--s", "must be ≥ 0");
        // rows are not checked on load so that malformed bets surface as counterexamples
        const auto spec = [&] {
          try {
            return galelab::load_gambler(v_spec, galelab::RowCheck::skip);
          } catch (const Error& e) {
            throw UsageError("--spec", e.what());
          }
        }();
        if (spec.k() != 1) throw UsageError("--spec", "the gale suite needs a 1-bet gambler");
        report = galelab::verify_gale_spec(spec, s, v_depth);
      } else if (v_suite == "gale") {
        report = galelab::verify_gale_suite(v_trials, v_seed, v_depth);
      } else {
        report = galelab::run_suite(v_suite, v_trials, v_seed);
      }
      auto j = galelab::to_json(report);
      j["seed"] = v_seed;
      if (!v_out.empty()) {
        ctx.params = {{"suite", v_suite}, {"trials", v_trials}, {"seed", v_seed}, {"spec", v_spec}};
        if (!v_spec.empty()) ctx.inputs.push_back({{"spec", v_spec}, {"sha256", sha256_hex(read_file(v_spec))}});
        j["manifest"] = ctx.manifest_path(v_out);
        write_file(v_out, j.dump(2) + "\n");
        ctx.outputs.push_back(v_out);
        ctx.write_manifest(v_out);
      }
      std::cout << j.dump(2) << "\n";
      return report.passed() ? 0 : 1;
    }

    if (*equiv) {
      ctx.command = "equiv";
      const auto schedule = parse_checkpoints(q_checkpoints);
      const auto data = q_in.load(equiv->count("--n") > 0);
      const galelab::StreamFactory factory = [&data] { return std::make_unique<galelab::WordStream>(data); };
      const auto report = galelab::equivalence_experiment(factory, q_lmax, data.size(), schedule);
      auto j = galelab::to_json(report);
      if (!q_out.empty()) {
        ctx.params = {{"lmax", q_lmax}, {"n", data.size()}};
        ctx.inputs.push_back(q_in.describe(data));
        j["manifest"] = ctx.manifest_path(q_out);
        write_file(q_out, j.dump(2) + "\n");
        ctx.outputs.push_back(q_out);
        ctx.write_manifest(q_out);
      }
      json summary{{"disjoint", report.disjoint.estimate},
                   {"sliding", report.sliding.estimate},
                   {"estimate_gap", report.estimate_gap},
                   {"max_per_length_gap", report.max_per_length_gap}};
      std::cout << summary.dump(2) << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << galelab::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
