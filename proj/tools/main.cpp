#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relaymatch/experiment.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "relaymatch: relay-aided D2D resource allocation experiments\n"
      "Runs the distributed worst-case-robust allocator over seeded network\n"
      "realizations and writes machine-readable results."};

  std::string config_path;
  std::string sweep_arg;
  std::string modes_arg = "proposed";
  std::string out_path;
  std::string format_arg = "csv";
  std::string channel_dump, channel_load, trace_path;
  long long seed = -1;
  int realizations = -1;

  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--sweep", sweep_arg,
                 "sweep axis and values, e.g. d_dd_m=10,20,30 (axes: d_dd_m, d_rd_m, xi, num_ues)");
  app.add_option("--modes", modes_arg,
                 "comma list of proposed, reference-direct, oracle-on-tiny");
  app.add_option("--out", out_path, "output path prefix (writes <out>.csv/.json)");
  app.add_option("--format", format_arg, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "override config seed");
  app.add_option("--realizations", realizations, "override config realization count");
  app.add_option("--channel-dump", channel_dump, "write the first realization's gains to CSV");
  app.add_option("--channel-load", channel_load,
                 "replay gains from a dump (single realization, no sweep)");
  app.add_option("--trace", trace_path, "write the first run's per-iteration trace CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    relaymatch::ExperimentSpec spec;
    spec.base = relaymatch::load_config_file(config_path);
    if (seed >= 0) spec.base.seed = static_cast<std::uint64_t>(seed);
    if (realizations > 0) spec.base.realizations = realizations;
    spec.base.validate();

    if (!sweep_arg.empty()) {
      const auto eq = sweep_arg.find('=');
      if (eq == std::string::npos)
        throw relaymatch::ExperimentError("--sweep expects axis=v1,v2,...");
      spec.axis = relaymatch::parse_axis(sweep_arg.substr(0, eq));
      for (const auto& v : split(sweep_arg.substr(eq + 1), ','))
        spec.values.push_back(std::stod(v));
    }
    spec.modes.clear();
    for (const auto& m : split(modes_arg, ',')) spec.modes.push_back(relaymatch::parse_mode(m));
    spec.out_path = out_path;
    spec.format = format_arg == "json" ? relaymatch::OutputFormat::Json
                                       : relaymatch::OutputFormat::Csv;
    if (!channel_dump.empty()) spec.channel_dump_path = channel_dump;
    if (!channel_load.empty()) spec.channel_load_path = channel_load;
    if (!trace_path.empty()) spec.trace_path = trace_path;

    const relaymatch::ExperimentResult result = relaymatch::run_experiment(spec);

    if (out_path.empty()) {
      std::cout << relaymatch::rows_to_csv(result.rows);
    } else {
      std::cout << result.rows.size() << " rows -> " << out_path
                << (spec.format == relaymatch::OutputFormat::Csv ? ".csv" : ".json") << "\n";
      if (spec.axis != relaymatch::SweepAxis::None)
        std::cout << "summary -> " << out_path << "_summary.csv\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
