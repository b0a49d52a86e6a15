// hardylab: command-line front end for the batch runner.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hardylab/hardylab.hpp"

using namespace hardylab;

namespace {

struct Flags {
  std::string config, out, preset;
  bool json_out = false;
  std::map<std::string, std::string> raw;  // flag name -> value as typed
};

const std::set<std::string> kIntKeys = {"N", "M", "cap", "K", "d", "density_N"};
const std::set<std::string> kRealKeys = {"eps", "tol", "radius", "density_tol"};

json typed(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (kIntKeys.count(key)) {
      const long x = std::stol(v, &pos);
      if (pos == v.size()) return x;
    } else if (kRealKeys.count(key)) {
      const double x = std::stod(v, &pos);
      if (pos == v.size()) return x;
    } else {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Config, "flag --" + key + " has an invalid value '" + v + "'");
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run config; flags override its params");
  sub->add_option("--out", f.out, "output stem: writes STEM.json, STEM.csv, STEM.provenance.json");
  sub->add_option("--preset", f.preset, "named preset (see `hardylab presets`)");
  sub->add_flag("--json", f.json_out, "print the full JSON report instead of the table");
}

void add_param(CLI::App* sub, Flags& f, const std::string& key, const std::string& help) {
  const std::string flag = key == "h" ? "target" : key;  // -h is help
  sub->add_option_function<std::string>("--" + flag, [&f, key](const std::string& v) { f.raw[key] = v; }, help);
}

void print_table(const RunResult& r) {
  for (const auto& c : r.checks) {
    std::printf("%s  %-36s %6s  %-11.4g %s %-9.3g%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.N ? std::to_string(*c.N).c_str() : "", c.value,
                c.rel == Relation::AtMost ? "<=" : c.rel == Relation::AtLeast ? ">=" : "==", c.tol,
                c.note.empty() ? "" : "  ", c.note.c_str());
  }
  std::size_t passed = 0;
  for (const auto& c : r.checks) passed += c.pass ? 1 : 0;
  std::printf("%zu/%zu checks passed\n", passed, r.checks.size());
}

int execute(const std::string& command, const std::string& probe, const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  if (c.command.empty()) c.command = command;
  else if (c.command != command) throw Error(ErrorKind::Config, "config command '" + c.command + "' does not match '" + command + "'");
  if (!probe.empty()) c.probe = probe;
  if (!f.preset.empty()) c.preset = f.preset;
  if (!f.out.empty()) c.out = f.out;
  for (const auto& [k, v] : f.raw) c.params[k] = typed(k, v);

  const RunResult r = run(c);
  if (!c.out.empty()) write_outputs(r, c.out);
  if (f.json_out) std::cout << r.report.dump(2) << "\n";
  else print_table(r);
  if (!r.result.empty() && !f.json_out) std::cout << "result: " << r.result.dump() << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardylab: numerical experiments on Hardy-space operator models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Flags f;
  std::string probe_kind;

  auto* factor = app.add_subcommand("factor", "inner/outer factorization of a polynomial");
  add_common(factor, f);
  for (const auto& [k, h] : std::map<std::string, std::string>{{"poly", "coefficients, low order first: \"1,-2.5,1\""},
                                                               {"cap", "root-finder degree cap"},
                                                               {"M", "boundary grid for the checks"},
                                                               {"tol", "reconstruction tolerance"}})
    add_param(factor, f, k, h);

  auto* model = app.add_subcommand("model", "S(m) for a finite Blaschke product");
  add_common(model, f);
  add_param(model, f, "zeros", "Blaschke zeros: \"0.5,0.3+0.2i\"");
  add_param(model, f, "N", "truncation order");

  auto* theta = app.add_subcommand("theta", "S(Theta) suite for a 2x1 inner column");
  add_common(theta, f);
  add_param(theta, f, "N", "truncation order");
  add_param(theta, f, "M", "boundary grid");
  add_param(theta, f, "checks", "\"all\" or a comma-separated list of check names");

  auto* probe = app.add_subcommand("probe", "closability, biorthogonality, spectral or rsc probes");
  probe->add_option("kind", probe_kind, "probe kind")->required()->check(CLI::IsMember({"closability", "biorthogonality", "spectral", "rsc"}));
  add_common(probe, f);
  for (const auto& [k, h] : std::map<std::string, std::string>{{"scenario", "poly-vs-outer | poly-vs-kernels | bilateral-arcs"},
                                                               {"eps", "target epsilon"},
                                                               {"g", "target: one | zero | arcs | auto"},
                                                               {"cap", "degree / kernel-point cap"},
                                                               {"N", "truncation order"},
                                                               {"M", "boundary grid"},
                                                               {"K", "pairing size"},
                                                               {"tol", "tolerance"},
                                                               {"lambdas", "spectral sample points"},
                                                               {"zeros", "Blaschke zeros (rsc model)"},
                                                               {"model", "rsc model: shift | blaschke"},
                                                               {"h", "rsc target coefficients (--target)"},
                                                               {"d", "rsc degree bound"}})
    add_param(probe, f, k, h);

  auto* suite = app.add_subcommand("suite", "worked example, confluence, corona and closability in one report");
  add_common(suite, f);
  add_param(suite, f, "N", "truncation order of the worked example");

  auto* presets = app.add_subcommand("presets", "list the preset catalog");
  bool presets_json = false;
  presets->add_flag("--json", presets_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_object(Error(ErrorKind::Config, e.what())).dump() << "\n";
    return kExitConfig;
  }

  try {
    if (presets->parsed()) {
      json cat = json::array();
      for (const auto& p : list_presets()) {
        if (presets_json) cat.push_back({{"name", p.name}, {"command", p.command}, {"description", p.description}});
        else std::printf("%-20s %-7s %s\n", p.name.c_str(), p.command.c_str(), p.description.c_str());
      }
      if (presets_json) std::cout << cat.dump(2) << "\n";
      return kExitPass;
    }
    for (auto* sub : {factor, model, theta, probe, suite})
      if (sub->parsed()) return execute(sub->get_name(), sub == probe ? probe_kind : "", f);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Config) {
      std::cout << error_object(e).dump() << "\n";
      return kExitFail;
    }
    std::cout << error_object(e).dump() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cout << json{{"schema", kSchemaVersion}, {"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}
