// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>
#include <vector>

#include "test_support.hpp"
#include "utilgeo/cultures.hpp"
#include "utilgeo/geometry.hpp"
#include "utilgeo/lottery.hpp"
#include "utilgeo/numerics.hpp"
#include "utilgeo/ordinal.hpp"
#include "utilgeo/stats.hpp"

using namespace utilgeo;
using utilgeo::testing::random_permutation;
using utilgeo::testing::random_point;

namespace {

// mpmath at 50 digits.
constexpr double kExampleDistance = 0.77401759384265277904;
constexpr double kWitnessAB = 0.52359877559829887308;
constexpr double kWitnessAC = 0.24256387409548549970;
constexpr double kWitnessRatio = 2.1586016365824691;
// scipy.stats.chi2.ppf(0.99, 23)
constexpr double kChi2Crit99Df23 = 41.638398118858476;

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0 || secs < budget_s;
  const bool pass = r.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.2f s", pass ? "PASS" : "FAIL", id, name, r.detail.c_str(), secs);
  if (budget_s > 0) std::printf(", budget %.0f s", budget_s);
  std::printf("]\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> values_of(const UtilityPoint& x) { return {x.values().begin(), x.values().end()}; }

// ---------------------------------------------------------------------------
// Independent cone projection by exhaustive enumeration of faces: for every
// linearly independent subset S of generators, least squares on span(S); the
// projection is the closest candidate with nonnegative coefficients.

struct BruteProjection {
  std::vector<double> point;
  double residual = 0.0;
};

bool solve_small(std::vector<std::vector<long double>> a, std::vector<long double> b,
                 std::vector<long double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-10L) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

BruteProjection brute_project(const std::vector<std::vector<double>>& gens, const std::vector<double>& v) {
  const std::size_t m = v.size();
  BruteProjection best;
  best.point.assign(m, 0.0);
  best.residual = norm(v);
  for (unsigned mask = 1; mask < (1u << gens.size()); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      if (mask & (1u << k)) idx.push_back(k);
    }
    if (idx.size() >= m) continue;
    const std::size_t n = idx.size();
    std::vector<std::vector<long double>> gram(n, std::vector<long double>(n));
    std::vector<long double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        long double s = 0;
        for (std::size_t t = 0; t < m; ++t) s += static_cast<long double>(gens[idx[i]][t]) * gens[idx[j]][t];
        gram[i][j] = s;
      }
      long double s = 0;
      for (std::size_t t = 0; t < m; ++t) s += static_cast<long double>(gens[idx[i]][t]) * v[t];
      rhs[i] = s;
    }
    std::vector<long double> c;
    if (!solve_small(gram, rhs, c)) continue;
    if (std::any_of(c.begin(), c.end(), [](long double x) { return x < 0; })) continue;
    std::vector<double> p(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < m; ++t) p[t] += static_cast<double>(c[i]) * gens[idx[i]][t];
    }
    double r2 = 0.0;
    for (std::size_t t = 0; t < m; ++t) r2 += (v[t] - p[t]) * (v[t] - p[t]);
    if (std::sqrt(r2) < best.residual) {
      best.residual = std::sqrt(r2);
      best.point = p;
    }
  }
  return best;
}

// How far v is from flipping its membership verdict, measured in the units
// the grid oracle resolves: for v outside, the smaller of its separation
// |v - p| and the slack of the generators not active at the separating
// direction (p - v)/|p - v|. Members are never marginal for the oracle.
double boundary_margin(const std::vector<std::vector<double>>& gens, const std::vector<double>& v) {
  const auto proj = brute_project(gens, v);
  if (proj.residual <= 1e-7) return std::numeric_limits<double>::infinity();
  std::vector<double> dir(v.size());
  for (std::size_t t = 0; t < v.size(); ++t) dir[t] = (proj.point[t] - v[t]) / proj.residual;
  double margin = proj.residual;
  for (const auto& g : gens) {
    const double s = dot(g, dir);
    if (s > 1e-7) margin = std::min(margin, s);
  }
  return margin;
}

// ---------------------------------------------------------------------------

Outcome quotient_invariance() {
  RandomStream rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 9);
    const auto u = rng.normals(m);
    const double a = 10.0 * (1.0 - rng.uniform());
    const double b = -10.0 + 20.0 * rng.uniform();
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = a * u[i] + b;
    const auto x = canonicalize(u);
    const auto y = canonicalize(w);
    if (x.is_indifference() != y.is_indifference()) return {false, "indifference verdicts differ"};
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return {worst <= 1e-12, fmt("max coordinate deviation %.3g over 1e4 draws (tol 1e-12)", worst)};
}

Outcome metric_axioms() {
  RandomStream rng(202);
  bool symmetric = true;
  double worst_triangle = 0.0;
  double worst_iso = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 3 + static_cast<std::size_t>(rng.uniform() * 6);
    const auto x = random_point(m, rng);
    const auto y = random_point(m, rng);
    const auto z = random_point(m, rng);
    const double dxy = distance(x, y);
    symmetric = symmetric && dxy == distance(y, x) && distance(x, x) == 0.0;
    worst_triangle = std::min(worst_triangle, dxy + distance(y, z) - distance(x, z));
    const auto perm = random_permutation(m, rng);
    worst_iso = std::max(worst_iso, std::abs(distance(permute(x, perm), permute(y, perm)) - dxy));
  }
  return {symmetric && worst_triangle >= -1e-10 && worst_iso <= 1e-12,
          fmt("symmetry %s, min triangle slack %.3g (>= -1e-10), max isometry defect %.3g (<= 1e-12)",
              symmetric ? "exact" : "BROKEN", worst_triangle, worst_iso)};
}

Outcome example_distance() {
  const auto u = canonicalize(std::vector<double>{0.00, 0.71, -0.71});
  const auto v = canonicalize(std::vector<double>{0.57, 0.22, -0.79});
  const double d = distance(u, v);
  const double via_acos = std::acos(std::clamp(dot(u.values(), v.values()), -1.0, 1.0));
  const double err = std::abs(d - kExampleDistance);
  return {err <= 1e-10 && std::abs(via_acos - d) <= 1e-10,
          fmt("d = %.15f, oracle %.15f, |diff| %.3g (tol 1e-10)", d, kExampleDistance, err)};
}

Outcome summation_equivalence() {
  RandomStream rng(404);
  int evaluated = 0, agreed = 0, excluded = 0, members = 0;
  std::string first_disagreement;
  while (evaluated < 1000) {
    const std::size_t m = 3 + static_cast<std::size_t>(rng.uniform() * 3);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 4);
    const std::size_t grid = m == 3 ? 4096 : 10000;
    std::vector<UtilityPoint> A;
    std::vector<std::vector<double>> gens;
    for (std::size_t i = 0; i < k; ++i) {
      A.push_back(random_point(m, rng));
      gens.push_back(values_of(A.back()));
    }
    UtilityPoint v = random_point(m, rng);
    if (rng.uniform() < 0.5) {
      std::vector<double> combo(m, 0.0);
      for (const auto& g : gens) {
        const double w = rng.uniform();
        for (std::size_t t = 0; t < m; ++t) combo[t] += w * g[t];
      }
      v = canonicalize(combo);
      if (v.is_indifference()) continue;
    }
    if (boundary_margin(gens, values_of(v)) < grid_angular_spacing(m, grid)) {
      ++excluded;
      continue;
    }
    ++evaluated;
    const bool in_sum = sum_contains(A, v);
    members += in_sum ? 1 : 0;
    if (in_sum == unanimity_oracle(A, v, grid)) {
      ++agreed;
    } else if (first_disagreement.empty()) {
      first_disagreement = fmt(" first disagreement: m=%zu |A|=%zu sum=%d", m, k, in_sum ? 1 : 0);
    }
  }
  return {agreed == evaluated, fmt("%d/%d agree (%d members), %d marginal instances excluded%s", agreed,
                                   evaluated, members, excluded, first_disagreement.c_str())};
}

Outcome antipodal_sum() {
  RandomStream rng(505);
  bool ok = true;
  int true_count = 0;
  for (std::size_t m : {3u, 4u, 5u, 6u}) {
    const auto u = random_point(m, rng);
    const std::vector<UtilityPoint> A{u, invert(u)};
    std::vector<std::pair<UtilityPoint, bool>> probes{
        {u, true}, {invert(u), true}, {UtilityPoint::indifference(m), true}};
    for (int i = 0; i < 20; ++i) probes.emplace_back(random_point(m, rng), false);
    for (const auto& [p, expected] : probes) {
      const bool got = sum_contains(A, p);
      true_count += got ? 1 : 0;
      ok = ok && got == expected;
    }
  }
  return {ok, fmt("%d members among 4 x 23 probes (expected 12: u, -u, indifference per m)", true_count)};
}

Outcome impartial_culture() {
  int below = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CultureSpec s;
    s.m = 4;
    s.seed = seed;
    const auto pop = sample_population(s, 120000, workers());
    const auto r = chi_square_uniformity(facet_histogram(pop.points), 4);
    below += r.statistic < kChi2Crit99Df23 ? 1 : 0;
    worst = std::max(worst, r.statistic);
  }
  return {below >= 95, fmt("%d/100 seeds below chi2_0.99(23) = %.4f (need >= 95), max statistic %.2f", below,
                           kChi2Crit99Df23, worst)};
}

CultureSpec vmf(std::size_t m, double kappa, const UtilityPoint& pole, std::uint64_t seed) {
  CultureSpec s;
  s.kind = CultureKind::VMF;
  s.m = m;
  s.kappa = kappa;
  s.pole = pole;
  s.seed = seed;
  return s;
}

std::vector<double> cosines(const Population& pop, const UtilityPoint& pole) {
  std::vector<double> t;
  t.reserve(pop.points.size());
  for (const auto& x : pop.points) t.push_back(dot(x.values(), pole.values()));
  return t;
}

Outcome vmf_correctness() {
  const auto pole = canonicalize(std::vector<double>{1, 2, 3, 4});

  // (a) kappa = 0 against the uniform culture.
  int ks_pass = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto a = sample_population(vmf(4, 0.0, pole, seed), 100000, workers());
    CultureSpec u;
    u.m = 4;
    u.seed = 1000 + seed;
    const auto b = sample_population(u, 100000, workers());
    ks_pass += ks_two_sample(cosines(a, pole), cosines(b, pole)).p_value >= 0.01 ? 1 : 0;
  }

  // (b) cos(colatitude) on S^2 has density proportional to e^{kappa t} on
  // [-1, 1]; 50 equiprobable bins from its closed-form quantile.
  const int bins = 50;
  std::string colat;
  bool colat_ok = true;
  for (double kappa : {1.0, 5.0, 20.0}) {
    std::vector<double> edges(bins + 1);
    edges[0] = -1.0;
    edges[bins] = 1.0;
    for (int i = 1; i < bins; ++i) {
      const double q = static_cast<double>(i) / bins;
      edges[i] = 1.0 + std::log(q + (1.0 - q) * std::exp(-2.0 * kappa)) / kappa;
    }
    const auto pop = sample_population(vmf(4, kappa, pole, 77), 1000000, workers());
    std::vector<double> counts(bins, 0.0);
    for (double t : cosines(pop, pole)) {
      const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, t);
      counts[static_cast<std::size_t>(it - edges.begin() - 1)] += 1.0;
    }
    const double expected = 1e6 / bins;
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    const double p = numerics::chi_square_upper_tail(stat, bins - 1);
    colat_ok = colat_ok && p >= 0.01;
    colat += fmt("%sk=%g p=%.3f", colat.empty() ? "" : ", ", kappa, p);
  }

  // (c) E_vmf[e^{-log density}] = 1.
  std::string importance;
  bool importance_ok = true;
  for (double kappa : {1.0, 2.0}) {
    const auto spec = vmf(4, kappa, pole, 88);
    const auto pop = sample_population(spec, 1000000, workers());
    numerics::CompensatedSum sum;
    for (const auto& x : pop.points) sum.add(std::exp(-vmf_log_density(x, spec)));
    const double mean = sum.value() / 1e6;
    importance_ok = importance_ok && std::abs(mean - 1.0) <= 0.01;
    importance += fmt("%sk=%g %.4f", importance.empty() ? "" : ", ", kappa, mean);
  }
  return {ks_pass >= 95 && colat_ok && importance_ok,
          fmt("(a) KS at 1%%: %d/100 seeds pass (need >= 95); (b) colatitude chi2: %s; (c) importance mean "
              "(1 +- 0.01): %s",
              ks_pass, colat.c_str(), importance.c_str())};
}

// Two-sample chi-square homogeneity test over the cells present in either
// sample.
double homogeneity_p(const std::map<PreferenceOrder, double>& a, const std::map<PreferenceOrder, double>& b) {
  std::map<PreferenceOrder, std::pair<double, double>> cells;
  for (const auto& [k, c] : a) cells[k].first = c;
  for (const auto& [k, c] : b) cells[k].second = c;
  double na = 0, nb = 0;
  for (const auto& [k, c] : cells) {
    na += c.first;
    nb += c.second;
  }
  double stat = 0.0;
  for (const auto& [k, c] : cells) {
    const double tot = c.first + c.second;
    const double ea = tot * na / (na + nb);
    const double eb = tot * nb / (na + nb);
    stat += (c.first - ea) * (c.first - ea) / ea + (c.second - eb) * (c.second - eb) / eb;
  }
  return numerics::chi_square_upper_tail(stat, static_cast<double>(cells.size() - 1));
}

Outcome mallows_exactness() {
  CultureSpec s;
  s.kind = CultureKind::Mallows;
  s.m = 3;
  s.kappa = 1.0;
  s.pole = PreferenceOrder::parse("1>2>3");
  s.seed = 808;
  const double n = 1e6;
  const auto pop = sample_population(s, static_cast<std::size_t>(n), workers());
  std::map<PreferenceOrder, double> freq;
  for (const auto& o : pop.orders) freq[o] += 1.0;
  double worst_z = 0.0;
  double pmf_total = 0.0;
  for (const auto& o : enumerate_strict_orders(3)) {
    const double p = mallows_pmf(o, s);
    pmf_total += p;
    worst_z = std::max(worst_z, std::abs(freq[o] / n - p) / std::sqrt(p * (1 - p) / n));
  }
  // Closed-form partition function prod_j (1 - q^j) / (1 - q), q = e^{-kappa}.
  const double q = std::exp(-1.0);
  const double z = (1 - q * q) / (1 - q) * (1 - q * q * q) / (1 - q);
  const double pmf_err = std::abs(mallows_pmf(s.pole_order(), s) - 1.0 / z);

  std::string dist;
  bool dist_ok = true;
  RandomStream pick(809);
  for (std::size_t m = 2; m <= 6; ++m) {
    CultureSpec t;
    t.kind = CultureKind::Mallows;
    t.m = m;
    t.kappa = m <= 4 ? 0.7 : 0.3;
    auto ranking = random_permutation(m, pick);
    t.pole = PreferenceOrder::strict(ranking);
    std::map<PreferenceOrder, double> a, b;
    const EnumeratedMallows table(t);
    RandomStream ra(900 + m), rb(950 + m);
    for (int i = 0; i < 200000; ++i) {
      a[sample_mallows(t, ra)] += 1.0;
      b[table.draw(rb)] += 1.0;
    }
    const double p = homogeneity_p(a, b);
    dist_ok = dist_ok && p >= 0.01;
    dist += fmt("%sm=%zu p=%.3f", dist.empty() ? "" : ", ", m, p);
  }
  return {worst_z <= 3.0 && std::abs(pmf_total - 1.0) <= 1e-12 && pmf_err <= 1e-14 && dist_ok,
          fmt("m=3 k=1 max |z| %.2f (<= 3), pmf vs closed form %.1g; insertion vs enumeration: %s", worst_z,
              pmf_err, dist.c_str())};
}

Outcome cube_counterexample() {
  const auto A = canonicalize(std::vector<double>{1, 1, -1});
  const auto B = canonicalize(std::vector<double>{0, 1, -1});
  const auto C = canonicalize(std::vector<double>{1, 0.5, -1});
  const double cab = cube_distance_m3(A, B), cac = cube_distance_m3(A, C);
  const double rab = distance(A, B), rac = distance(A, C);
  bool ok = std::abs(cab - 1.0) <= 1e-12 && std::abs(cac - 0.5) <= 1e-12;
  ok = ok && std::abs(rab - kWitnessAB) <= 1e-10 && std::abs(rac - kWitnessAC) <= 1e-10;
  ok = ok && std::abs(rab / rac - kWitnessRatio) <= 1e-9 && std::abs(rab / rac - cab / cac) > 0.1;
  RandomStream rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto x = random_point(3, rng);
    const auto y = random_point(3, rng);
    const double d = cube_distance_m3(x, y);
    for (const auto& o : enumerate_strict_orders(3)) {
      worst = std::max(worst, std::abs(cube_distance_m3(permute(x, o.ranking()), permute(y, o.ranking())) - d));
    }
  }
  ok = ok && worst <= 1e-12;
  return {ok, fmt("cube d(A,B)=%.15g d(A,C)=%.15g ratio %.6g; round %.12f %.12f ratio %.6f; "
                  "cube isometry defect %.3g",
                  cab, cac, cab / cac, rab, rac, rab / rac, worst)};
}

Outcome equal_balls() {
  CultureSpec s;
  s.m = 4;
  s.seed = 1010;
  const auto pop = sample_population(s, 100000, workers());
  RandomStream rng(1011);
  std::vector<double> p;
  for (int i = 0; i < 20; ++i) p.push_back(ball_probability(pop.points, random_point(4, rng), 0.5));
  double pooled = 0.0;
  for (double x : p) pooled += x;
  pooled /= static_cast<double>(p.size());
  const double se = std::sqrt(pooled * (1 - pooled) / 1e5);
  double worst = 0.0;
  for (double x : p) worst = std::max(worst, std::abs(x - pooled) / se);
  return {worst <= 4.0, fmt("pooled %.5f, max deviation %.2f binomial SE (<= 4) over 20 centers", pooled, worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / ("utilgeo_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"uniform", "--culture uniform --m 5 --indifference-prob 0.05"},
      {"vmf", "--culture vmf --m 4 --kappa 10 --pole 0.5,0.5,-0.5,-0.5 --indifference-prob 0.05"},
      {"mallows", "--culture mallows --m 5 --kappa 0.5 --pole '3>1>5>2>4' --indifference-prob 0.05"}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, flags] : runs) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "1", "4", "4"}) {
      const auto out = dir / (name + "_" + threads + "_" + std::to_string(outputs.size()) + ".jsonl");
      const std::string cmd = std::string("UTILGEO_THREADS=") + threads + " '" + UTILGEO_CLI + "' generate " +
                              flags + " --n 20000 --seed 42 --format jsonl --out '" + out.string() + "'";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, name + ": generate failed"};
      outputs.push_back(slurp(out));
    }
    const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const auto& o) { return o == outputs[0]; });
    ok = ok && same && !outputs[0].empty();
    detail += fmt("%s%s %s (%zu bytes)", detail.empty() ? "" : ", ", name.c_str(),
                  same ? "identical" : "DIFFERENT", outputs[0].size());
  }
  fs::remove_all(dir);
  return {ok, detail + " across 2 runs x threads {1,4}"};
}

}  // namespace

int main() {
  criterion(1, "quotient invariance", 1, quotient_invariance);
  criterion(2, "metric axioms and permutation isometry", 2, metric_axioms);
  criterion(3, "example distance", 0, example_distance);
  criterion(4, "summation equals unanimity", 30, summation_equivalence);
  criterion(5, "antipodal summation", 1, antipodal_sum);
  criterion(6, "uniform culture is impartial on facets", 60, impartial_culture);
  criterion(7, "von Mises-Fisher sampler", 300, vmf_correctness);
  criterion(8, "Mallows sampler exactness", 120, mallows_exactness);
  criterion(9, "cube metric counterexample", 0, cube_counterexample);
  criterion(10, "equal ball probabilities", 0, equal_balls);
  criterion(11, "CLI determinism", 0, cli_determinism);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
