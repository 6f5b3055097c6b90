#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pmt/testbed/config.hpp"
#include "pmt/testbed/pipeline.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "json";
  double grid_h = 0.0;
  std::vector<double> deltas;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "scenario config (YAML)")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output path; stdout when omitted");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--grid-h", c.grid_h, "BVP grid spacing")->check(CLI::PositiveNumber);
  app->add_option("--delta", c.deltas, "mollifier deltas")->delimiter(',');
}

pmt::ScenarioConfig default_config(const std::string& pipeline) {
  pmt::ScenarioConfig c;
  const bool quarter = pipeline == "flatten" || pipeline == "double" || pipeline == "theorem-2";
  if (quarter) {
    c.scenario = pmt::ScenarioKind::quarter_schwarzschild;
    c.domain.kind = pmt::DomainKind::quarter_space;
  } else {
    c.scenario = pmt::ScenarioKind::glued_schwarzschild_flat;
  }
  return c;
}

pmt::ScenarioConfig make_config(const Common& o, const std::string& pipeline) {
  pmt::ScenarioConfig c = o.config.empty() ? default_config(pipeline) : pmt::load_config(o.config);
  if (!pipeline.empty()) c.pipeline = {pipeline};
  if (c.pipeline.empty()) throw pmt::ConfigError("no pipeline given on the command line or in the config");
  if (o.grid_h > 0.0) c.grid_h = o.grid_h;
  if (!o.deltas.empty()) c.deltas = o.deltas;
  c.validate();
  return c;
}

void summarize(const pmt::Report& r) {
  for (const pmt::StageResult& s : r.stages) {
    int failed = 0;
    for (const pmt::Check& c : s.checks) failed += c.pass ? 0 : 1;
    std::cerr << s.name << ": " << pmt::to_string(s.status);
    if (failed) std::cerr << " (" << failed << " failed checks)";
    if (!s.message.empty() && s.status != pmt::StageStatus::passed) std::cerr << " - " << s.message;
    std::cerr << "\n";
  }
}

int emit(const pmt::Report& r, const Common& o) {
  const pmt::ReportFormat f = pmt::report_format_from_string(o.format);
  if (!o.out.empty()) {
    for (const std::string& p : pmt::emit_report(r, f, o.out)) std::cerr << "wrote " << p << "\n";
  } else if (f == pmt::ReportFormat::json) {
    std::cout << pmt::report_to_json(r);
  } else {
    for (const pmt::MassSeries& s : r.series) std::cout << "# " << s.name << "\n" << pmt::series_to_csv(s);
  }
  summarize(r);
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmtlab: mass functionals and verification pipelines"};
  app.require_subcommand(1);
  Common opt;
  std::string pipeline, input;

  const std::vector<std::pair<std::string, std::string>> simple = {
      {"curvature", "scalar and face mean curvature at sample points"},
      {"mass", "extrapolated mass of the scenario metric"},
      {"mollify", "collar, mollification and curvature control"},
      {"solve", "correction solve and corrected-metric certificates"},
      {"flatten", "conformal flattening of a quarter-space metric"},
      {"double", "flatten, double and check the seam and mass relation"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : simple) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, opt);
    subs.push_back(s);
  }
  CLI::App* verify = app.add_subcommand("verify", "run a named pipeline");
  verify->add_option("pipeline", pipeline,
                     "theorem-1, theorem-2, acceptance or criterion-1 .. criterion-11; "
                     "defaults to the pipeline of --config");
  add_common(verify, opt);
  CLI::App* report = app.add_subcommand("report", "re-emit a JSON report");
  report->add_option("input", input, "report document")->required()->check(CLI::ExistingFile);
  report->add_option("--out", opt.out, "output path; stdout when omitted");
  report->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      std::ifstream f(input);
      std::stringstream ss;
      ss << f.rdbuf();
      return emit(pmt::report_from_json(ss.str()), opt);
    }
    std::string name = pipeline;
    for (CLI::App* s : subs)
      if (s->parsed()) name = s->get_name();
    if (!name.empty() && !pmt::is_named_pipeline(name))
      throw pmt::ConfigError("unknown pipeline '" + name + "'");
    return emit(pmt::run_pipeline(make_config(opt, name)), opt);
  } catch (const std::exception& e) {
    std::cerr << "pmtlab: " << e.what() << "\n";
    return 2;
  }
}
