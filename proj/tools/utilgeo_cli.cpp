// utilgeo command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "utilgeo/utilgeo.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CliFailure {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& message) { throw CliFailure{kExitUsage, message}; }

void check(ug_status status) {
  if (status == UG_OK) return;
  const int code = status == UG_ERR_IO ? kExitIo : kExitUsage;
  throw CliFailure{code, std::string(ug_status_name(status)) + ": " + ug_last_error()};
}

std::vector<double> parse_csv_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    if (first == std::string::npos) usage_error(std::string(flag) + ": empty field in '" + text + "'");
    field = field.substr(first, last - first + 1);
    char* end = nullptr;
    const double x = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) {
      usage_error(std::string(flag) + ": '" + field + "' is not a number");
    }
    out.push_back(x);
  }
  if (out.empty()) usage_error(std::string(flag) + ": no values");
  return out;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("UTILGEO_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return n;
    usage_error("UTILGEO_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct CultureDeleter {
  void operator()(ug_culture* c) const { ug_culture_destroy(c); }
};
struct PopulationDeleter {
  void operator()(ug_population* p) const { ug_population_destroy(p); }
};
struct StringDeleter {
  void operator()(char* s) const { ug_string_free(s); }
};
using CulturePtr = std::unique_ptr<ug_culture, CultureDeleter>;
using PopulationPtr = std::unique_ptr<ug_population, PopulationDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct GenerateArgs {
  std::string culture;
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double kappa = 0.0;
  std::optional<std::string> pole;
  double indifference_prob = 0.0;
  std::string out;
  std::string format = "jsonl";
};

int run_generate(const GenerateArgs& args) {
  nlohmann::json spec = {{"kind", args.culture},
                         {"m", args.m},
                         {"kappa", args.kappa},
                         {"indifference_prob", args.indifference_prob},
                         {"seed", args.seed}};
  if (args.pole) {
    const bool looks_like_order = args.pole->find('>') != std::string::npos;
    if (args.culture == "mallows") {
      spec["pole"] = *args.pole;
    } else if (args.culture == "vmf" && !looks_like_order) {
      spec["pole"] = parse_csv_reals(*args.pole, "--pole");
    } else {
      usage_error("--pole '" + *args.pole + "' does not fit culture " + args.culture);
    }
  }
  ug_culture* raw_culture = nullptr;
  check(ug_culture_from_json(spec.dump().c_str(), &raw_culture));
  CulturePtr culture(raw_culture);

  ug_population* raw_pop = nullptr;
  check(ug_population_generate(culture.get(), args.n, worker_count(), &raw_pop));
  PopulationPtr pop(raw_pop);
  check(ug_population_write(pop.get(), args.out.c_str(),
                            args.format == "csv" ? UG_FORMAT_CSV : UG_FORMAT_JSONL));
  return 0;
}

int run_distance(const std::string& u_text, const std::string& v_text, const std::string& metric) {
  const auto u = parse_csv_reals(u_text, "--u");
  const auto v = parse_csv_reals(v_text, "--v");
  if (u.size() != v.size()) usage_error("--u and --v have different lengths");
  double d = 0.0;
  check(ug_distance(u.data(), v.data(), u.size(), metric == "cube3" ? UG_METRIC_CUBE3 : UG_METRIC_ROUND, &d));
  std::printf("%.12g\n", d);
  return 0;
}

std::vector<std::vector<double>> read_utility_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliFailure{kExitIo, "cannot open '" + path + "'"};
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      rows.push_back(j.is_object() ? j.at("u").get<std::vector<double>>() : j.get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      usage_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

int run_sumcheck(const std::string& set_path, const std::string& v_text, std::optional<std::size_t> grid) {
  const auto v = parse_csv_reals(v_text, "--v");
  const auto rows = read_utility_set(set_path);
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != v.size()) usage_error("set vectors and --v have different lengths");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  int contains = 0;
  check(ug_sum_contains(flat.data(), rows.size(), v.size(), v.data(), &contains));
  std::printf("%s\n", contains ? "true" : "false");
  if (grid) {
    int holds = 0;
    check(ug_unanimity_oracle(flat.data(), rows.size(), v.size(), v.data(), *grid, &holds));
    std::printf("oracle: %s\nagree: %s\n", holds ? "true" : "false", holds == contains ? "true" : "false");
  }
  return 0;
}

int run_stats(const std::string& in_path, double tie_tol, const std::optional<std::string>& center,
              std::optional<double> radius) {
  if (center.has_value() != radius.has_value()) {
    usage_error("--ball-center and --ball-radius go together");
  }
  ug_population* raw_pop = nullptr;
  check(ug_population_read(in_path.c_str(), &raw_pop));
  PopulationPtr pop(raw_pop);
  std::vector<double> c;
  ug_stats_options options{tie_tol, nullptr, 0, 0.0};
  if (center) {
    c = parse_csv_reals(*center, "--ball-center");
    options.ball_center = c.data();
    options.center_m = c.size();
    options.ball_radius = *radius;
  }
  char* raw_report = nullptr;
  check(ug_stats_report(pop.get(), &options, &raw_report));
  StringPtr report(raw_report);
  std::printf("%s\n", report.get());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry and sampling on the expected-utility space"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a population of agents");
  generate->add_option("--culture", gen.culture, "uniform | vmf | mallows")
      ->required()
      ->check(CLI::IsMember({"uniform", "vmf", "mallows"}));
  generate->add_option("--m", gen.m, "Number of candidates")->required();
  generate->add_option("--n", gen.n, "Number of agents")->required();
  generate->add_option("--seed", gen.seed, "64-bit seed")->required();
  generate->add_option("--kappa", gen.kappa, "Concentration (vmf, mallows)");
  generate->add_option("--pole", gen.pole, "Utility CSV (vmf) or order like 1>2>3 (mallows)");
  generate->add_option("--indifference-prob", gen.indifference_prob, "Probability of an indifferent agent");
  generate->add_option("--out", gen.out, "Output file")->required();
  generate->add_option("--format", gen.format, "jsonl | csv")->check(CLI::IsMember({"jsonl", "csv"}));

  std::string du;
  std::string dv;
  std::string metric = "round";
  auto* dist = app.add_subcommand("distance", "Distance between two utility vectors");
  dist->add_option("--u", du, "Raw utility CSV")->required();
  dist->add_option("--v", dv, "Raw utility CSV")->required();
  dist->add_option("--metric", metric, "round | cube3")->check(CLI::IsMember({"round", "cube3"}));

  std::string set_path;
  std::string sv;
  std::optional<std::size_t> grid;
  auto* sumcheck = app.add_subcommand("sumcheck", "Is v in the summation of a set of utilities?");
  sumcheck->add_option("--set", set_path, "JSONL file of utility vectors")->required();
  sumcheck->add_option("--v", sv, "Raw utility CSV")->required();
  sumcheck->add_option("--oracle-grid", grid, "Also run the unanimity oracle with this grid size");

  std::string in_path;
  double tie_tol = 1e-9;
  std::optional<std::string> center;
  std::optional<double> radius;
  auto* stats = app.add_subcommand("stats", "Statistics report for a population file");
  stats->add_option("--in", in_path, "Population file (jsonl or csv)")->required();
  stats->add_option("--tie-tol", tie_tol, "Tie tolerance for orders");
  stats->add_option("--ball-center", center, "Raw utility CSV");
  stats->add_option("--ball-radius", radius, "Ball radius in radians");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "utilgeo: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*dist) return run_distance(du, dv, metric);
    if (*sumcheck) return run_sumcheck(set_path, sv, grid);
    if (*stats) return run_stats(in_path, tie_tol, center, radius);
  } catch (const CliFailure& f) {
    std::cerr << "utilgeo: " << f.message << '\n';
    return f.code;
  }
  return kExitUsage;
}
