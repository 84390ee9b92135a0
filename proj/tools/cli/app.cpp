#include "cli/app.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "qbs/errors.hpp"

namespace qbs::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<OptionSpec>& global_specs() {
  static const std::vector<OptionSpec> specs = {
      {"format", "csv", "csv or json"},
      {"jobs", "0", "worker threads (0 = all cores)"},
      {"units", "gamma", "gamma (dimensionless) or hz"},
      {"gamma-hz", "1", "decay rate in Hz when --units hz"},
  };
  return specs;
}

const std::set<std::string> kFlags = {"--strict", "--help", "-h", "--version"};

// "--phi -pi:pi:5" would otherwise read as a short option cluster.
std::vector<std::string> glue_negative_values(std::vector<std::string> args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0 && a.find('=') == std::string::npos && !kFlags.count(a) &&
        i + 1 < args.size() && args[i + 1].size() > 1 && args[i + 1][0] == '-' &&
        args[i + 1][1] != '-') {
      out.push_back(a + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = strip(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    kv[key] = strip(line.substr(eq + 1));
  }
  return kv;
}

struct Invocation {
  const CommandSpec* spec = nullptr;
  Options options;
  std::string output;
  std::string format;
  RunContext ctx;
};

nlohmann::ordered_json manifest_core(const Invocation& inv, const Table& t) {
  nlohmann::ordered_json m;
  m["tool"] = "qbs";
  m["version"] = kVersion;
  m["command"] = inv.spec->name;
  nlohmann::ordered_json opts;
  for (const auto& [k, v] : inv.options.values) opts[k] = v;
  m["options"] = opts;
  m["strict"] = inv.ctx.strict;
  m["rows"] = t.rows.size();
  auto errs = nlohmann::ordered_json::array();
  for (const auto& e : t.errors) errs.push_back({{"row", e.row}, {"message", e.message}});
  m["errors"] = errs;
  return m;
}

std::string render(const Invocation& inv, const Table& t) {
  std::ostringstream os;
  if (inv.format == "json")
    write_json(os, t, manifest_core(inv, t));
  else
    write_csv(os, t);
  return os.str();
}

void write_atomically(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IoError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into '" + path + "'");
  }
}

int execute(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const Table table = inv.spec->run(inv.options, inv.ctx);
  const std::string bytes = render(inv, table);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (inv.output.empty() || inv.output == "-") {
    out << bytes;
  } else {
    auto manifest = manifest_core(inv, table);
    manifest["format"] = inv.format;
    manifest["jobs"] = inv.ctx.jobs;
    manifest["output"] = inv.output;
    manifest["output_sha256"] = sha256_hex(bytes);
    manifest["duration_s"] = seconds;
    write_atomically(inv.output, bytes);
    write_atomically(inv.output + ".manifest.json", manifest.dump(1) + "\n");
  }
  for (const auto& e : table.errors) err << "warning: row " << e.row << ": " << e.message << '\n';
  return kOk;
}

int parse_and_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-atom waveguide beam splitter: scattering, coherence and oracle sweeps", "qbs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::map<std::string, std::string> globals;
  std::map<std::string, CLI::Option*> global_opts;
  for (const auto& g : global_specs()) {
    globals[g.name] = g.fallback;
    global_opts[g.name] = app.add_option("--" + g.name, globals[g.name], g.help);
  }
  std::string output, config;
  bool strict = false;
  app.add_option("--output,-o", output, "output file (stdout when omitted)");
  app.add_option("--config", config, "key=value file; command-line flags take precedence");
  app.add_flag("--strict", strict, "abort with exit code 3 on any degenerate point");

  std::string rerun_manifest;
  auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in a manifest");
  rerun->add_option("manifest", rerun_manifest, "manifest JSON file")->required();
  rerun->fallthrough();

  struct Sub {
    const CommandSpec* spec;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
  };
  std::vector<Sub> subs;
  subs.reserve(command_specs().size());
  for (const auto& spec : command_specs()) {
    subs.push_back({&spec, app.add_subcommand(spec.name, spec.help), {}, {}});
    Sub& s = subs.back();
    s.app->fallthrough();
    for (const auto& o : spec.options) {
      s.values[o.name] = o.fallback;
      s.opts[o.name] = s.app->add_option("--" + o.name, s.values[o.name], o.help);
    }
  }

  args = glue_negative_values(std::move(args));
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  if (rerun->parsed()) {
    std::ifstream in(rerun_manifest);
    if (!in) throw ConfigError("cannot read manifest '" + rerun_manifest + "'");
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
    std::vector<std::string> again;
    again.push_back(m.at("command").get<std::string>());
    for (const auto& [k, v] : m.at("options").items()) again.push_back("--" + k + "=" + v.get<std::string>());
    if (m.value("strict", false)) again.push_back("--strict");
    const std::string target = output.empty() ? m.value("output", std::string()) : output;
    if (!target.empty()) again.push_back("--output=" + target);
    return parse_and_run(again, out, err);
  }

  Sub* chosen = nullptr;
  for (auto& s : subs)
    if (s.app->parsed()) chosen = &s;
  if (!chosen) throw ConfigError("no command given");

  if (!config.empty()) {
    for (const auto& [k, v] : read_config(config)) {
      if (auto it = chosen->opts.find(k); it != chosen->opts.end()) {
        if (it->second->count() == 0) chosen->values[k] = v;
      } else if (auto gt = global_opts.find(k); gt != global_opts.end()) {
        if (gt->second->count() == 0) globals[k] = v;
      } else if (k == "strict") {
        if (v == "true" || v == "1") strict = true;
      } else if (k == "output") {
        if (output.empty()) output = v;
      } else {
        throw ConfigError("unknown config key '" + k + "' for " + chosen->spec->name);
      }
    }
  }

  Invocation inv;
  inv.spec = chosen->spec;
  inv.options.values = chosen->values;
  inv.output = output;
  inv.format = globals["format"];
  if (inv.format != "csv" && inv.format != "json") throw ConfigError("--format must be csv or json");
  const std::string& units = globals["units"];
  if (units != "gamma" && units != "hz") throw ConfigError("--units must be gamma or hz");
  inv.options.hz = units == "hz";
  inv.options.gamma_hz = parse_scalar(globals["gamma-hz"]);
  if (!(inv.options.gamma_hz > 0.0)) throw ConfigError("--gamma-hz must be positive");
  // the unit choice is part of the resolved configuration
  for (const auto& g : global_specs())
    if (g.name != "jobs" && g.name != "format") inv.options.values[g.name] = globals[g.name];
  inv.options.values["format"] = inv.format;
  const double jobs = parse_scalar(globals["jobs"]);
  if (jobs < 0 || jobs != std::floor(jobs)) throw ConfigError("--jobs must be a non-negative integer");
  inv.ctx.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<int>(jobs);
  inv.ctx.strict = strict;
  return execute(inv, out, err);
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 15];
  }
  return s;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  try {
    return parse_and_run(std::move(args), out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qbs::InvalidParameter& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericAbort& e) {
    err << "numeric degeneracy: " << e.what() << '\n';
    return kNumericAbort;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const qbs::Error& e) {
    // whole-run failures (bad balance ratio, dark port at a single point...)
    err << "error: " << e.what() << '\n';
    return kNumericAbort;
  }
}

}  // namespace qbs::cli
