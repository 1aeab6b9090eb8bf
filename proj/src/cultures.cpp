#include "utilgeo/cultures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "json.hpp"
#include "utilgeo/errors.hpp"
#include "utilgeo/numerics.hpp"

namespace utilgeo {

using nlohmann::json;

const char* to_string(CultureKind kind) noexcept {
  switch (kind) {
    case CultureKind::Uniform: return "uniform";
    case CultureKind::VMF: return "vmf";
    case CultureKind::Mallows: return "mallows";
  }
  return "uniform";
}

CultureKind parse_culture_kind(const std::string& text) {
  if (text == "uniform") return CultureKind::Uniform;
  if (text == "vmf") return CultureKind::VMF;
  if (text == "mallows") return CultureKind::Mallows;
  fail(ErrorCode::InvalidSpec, "unknown culture kind '" + text + "'");
}

void CultureSpec::validate() const {
  if (m < 2) fail(ErrorCode::InvalidSpec, "culture needs m >= 2");
  if (!std::isfinite(kappa) || kappa < 0.0) {
    fail(ErrorCode::InvalidSpec, "kappa must be finite and >= 0");
  }
  if (!(indifference_prob >= 0.0 && indifference_prob <= 1.0)) {
    fail(ErrorCode::InvalidSpec, "indifference_prob must lie in [0, 1]");
  }
  switch (kind) {
    case CultureKind::Uniform:
      if (!std::holds_alternative<std::monostate>(pole)) {
        fail(ErrorCode::InvalidSpec, "the uniform culture takes no pole");
      }
      break;
    case CultureKind::VMF: {
      const auto* p = std::get_if<UtilityPoint>(&pole);
      if (p == nullptr) fail(ErrorCode::InvalidSpec, "VMF needs a utility-vector pole");
      if (p->dimension() != m) fail(ErrorCode::InvalidSpec, "VMF pole has the wrong length");
      if (p->is_indifference()) {
        fail(ErrorCode::InvalidSpec, "VMF pole cannot be the indifference point");
      }
      break;
    }
    case CultureKind::Mallows: {
      const auto* o = std::get_if<PreferenceOrder>(&pole);
      if (o == nullptr) fail(ErrorCode::InvalidSpec, "Mallows needs an order pole");
      if (o->candidates() != m) fail(ErrorCode::InvalidSpec, "Mallows pole has the wrong size");
      if (!o->is_strict()) fail(ErrorCode::InvalidSpec, "Mallows pole must be a strict order");
      if (m > kMaxEnumerableCandidates) {
        fail(ErrorCode::SizeLimit, "Mallows is limited to m <= 8");
      }
      break;
    }
  }
}

const UtilityPoint& CultureSpec::pole_point() const {
  const auto* p = std::get_if<UtilityPoint>(&pole);
  if (p == nullptr) fail(ErrorCode::InvalidSpec, "culture has no utility-vector pole");
  return *p;
}

const PreferenceOrder& CultureSpec::pole_order() const {
  const auto* o = std::get_if<PreferenceOrder>(&pole);
  if (o == nullptr) fail(ErrorCode::InvalidSpec, "culture has no order pole");
  return *o;
}

std::string CultureSpec::to_json() const {
  json j = json::object();
  j["kind"] = to_string(kind);
  j["m"] = m;
  j["kappa"] = kappa;
  if (const auto* p = std::get_if<UtilityPoint>(&pole)) {
    j["pole"] = std::vector<double>(p->values().begin(), p->values().end());
  } else if (const auto* o = std::get_if<PreferenceOrder>(&pole)) {
    j["pole"] = o->to_string();
  } else {
    j["pole"] = nullptr;
  }
  j["indifference_prob"] = indifference_prob;
  j["seed"] = seed;
  return j.dump();
}

CultureSpec CultureSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("culture spec: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::InvalidSpec, "culture spec must be a JSON object");
  CultureSpec spec;
  try {
    spec.kind = parse_culture_kind(j.at("kind").get<std::string>());
    const auto& jm = j.at("m");
    if (!jm.is_number_unsigned()) fail(ErrorCode::InvalidSpec, "m must be a positive integer");
    spec.m = jm.get<std::size_t>();
    spec.kappa = j.value("kappa", 0.0);
    spec.indifference_prob = j.value("indifference_prob", 0.0);
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) {
        fail(ErrorCode::InvalidSpec, "seed must be an unsigned 64-bit integer");
      }
      spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("pole") && !j["pole"].is_null()) {
      const auto& jp = j["pole"];
      if (jp.is_string()) {
        spec.pole = PreferenceOrder::parse(jp.get<std::string>());
      } else if (jp.is_array()) {
        spec.pole = canonicalize(jp.get<std::vector<double>>());
      } else {
        fail(ErrorCode::InvalidSpec, "pole must be an order string or a number array");
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidSpec, std::string("culture spec: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SizeLimit) throw;
    fail(ErrorCode::InvalidSpec, std::string("culture spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

UtilityPoint sample_uniform(std::size_t m, RandomStream& stream) {
  if (m < 2) fail(ErrorCode::InvalidArgument, "sample_uniform needs m >= 2");
  while (true) {
    const auto g = stream.normals(m);
    const auto p = project_to_hyperplane(g);
    if (norm(p) > 1e-12) return canonicalize(p, 1e-300);
  }
}

double vmf_log_normalizer(std::size_t m, double kappa) {
  if (m < 2) fail(ErrorCode::InvalidArgument, "VMF needs m >= 2");
  if (kappa == 0.0) return 0.0;
  if (m == 2) {
    // Two-point sphere: 1/C = cosh(kappa).
    return -(kappa + std::log1p(std::exp(-2.0 * kappa)) - std::numbers::ln2);
  }
  // Colatitude density on S^{m-2} is proportional to sin^{m-3}; the factor
  // e^{kappa} is pulled out of the numerator to avoid overflow.
  const double power = static_cast<double>(m) - 3.0;
  const double pi = std::numbers::pi;
  const double numerator = numerics::integrate(
      [&](double t) { return std::exp(kappa * (std::cos(t) - 1.0)) * std::pow(std::sin(t), power); },
      0.0, pi);
  const double denominator =
      numerics::integrate([&](double t) { return std::pow(std::sin(t), power); }, 0.0, pi);
  return -(kappa + std::log(numerator) - std::log(denominator));
}

double vmf_log_density(const UtilityPoint& u, const CultureSpec& spec) {
  if (spec.kind != CultureKind::VMF) fail(ErrorCode::InvalidSpec, "spec is not a VMF culture");
  spec.validate();
  if (u.dimension() != spec.m) fail(ErrorCode::DimensionMismatch, "point and pole differ in m");
  if (u.is_indifference()) {
    fail(ErrorCode::IndifferencePoint, "VMF density is undefined at the indifference point");
  }
  return vmf_log_normalizer(spec.m, spec.kappa) + spec.kappa * dot(u.values(), spec.pole_point().values());
}

namespace {

void require_kind(const CultureSpec& spec, CultureKind kind) {
  if (spec.kind != kind) {
    fail(ErrorCode::InvalidSpec, std::string("expected a ") + to_string(kind) + " culture");
  }
  spec.validate();
}

PreferenceOrder repeated_insertion(const std::vector<std::size_t>& pole, double kappa,
                                   RandomStream& stream) {
  std::vector<std::size_t> ranking;
  ranking.reserve(pole.size());
  std::vector<double> weights;
  for (std::size_t i = 0; i < pole.size(); ++i) {
    // Inserting the (i+1)-th pole candidate at slot j (0 = top) creates i - j
    // inversions with respect to the pole.
    weights.assign(i + 1, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j <= i; ++j) {
      weights[j] = std::exp(-kappa * static_cast<double>(i - j));
      total += weights[j];
    }
    double target = stream.uniform() * total;
    std::size_t slot = i;
    for (std::size_t j = 0; j <= i; ++j) {
      if (target < weights[j]) {
        slot = j;
        break;
      }
      target -= weights[j];
    }
    ranking.insert(ranking.begin() + static_cast<std::ptrdiff_t>(slot), pole[i]);
  }
  return PreferenceOrder::strict(ranking);
}

PreferenceOrder all_tied(std::size_t m) {
  std::vector<std::size_t> everyone(m);
  for (std::size_t i = 0; i < m; ++i) everyone[i] = i;
  return PreferenceOrder({everyone});
}

}  // namespace

PreferenceOrder sample_mallows(const CultureSpec& spec, RandomStream& stream) {
  require_kind(spec, CultureKind::Mallows);
  return repeated_insertion(spec.pole_order().ranking(), spec.kappa, stream);
}

double mallows_pmf(const PreferenceOrder& sigma, const CultureSpec& spec) {
  require_kind(spec, CultureKind::Mallows);
  if (sigma.candidates() != spec.m) fail(ErrorCode::DimensionMismatch, "order and pole differ in m");
  const auto& pole = spec.pole_order();
  double normalization = 0.0;
  for (const auto& tau : enumerate_strict_orders(spec.m)) {
    normalization += std::exp(-spec.kappa * static_cast<double>(kendall_tau(tau, pole)));
  }
  return std::exp(-spec.kappa * static_cast<double>(kendall_tau(sigma, pole))) / normalization;
}

EnumeratedMallows::EnumeratedMallows(const CultureSpec& spec) : orders_(enumerate_strict_orders(spec.m)) {
  require_kind(spec, CultureKind::Mallows);
  cumulative_.resize(orders_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    total += std::exp(-spec.kappa * static_cast<double>(kendall_tau(orders_[k], spec.pole_order())));
    cumulative_[k] = total;
  }
}

PreferenceOrder EnumeratedMallows::draw(RandomStream& stream) const {
  const double target = stream.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                       orders_.size() - 1);
  return orders_[k];
}

PreferenceOrder sample_mallows_enumerated(const CultureSpec& spec, RandomStream& stream) {
  return EnumeratedMallows(spec).draw(stream);
}

Culture::Culture(CultureSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.kind == CultureKind::VMF) {
    pole_basis_ = hyperplane_basis_at(spec_.pole_point().values());
    // Wood's rejection constants for the colatitude cosine W on S^k,
    // k = m - 2.
    const double k = static_cast<double>(spec_.m) - 2.0;
    if (k > 0.0) {
      const double kappa = spec_.kappa;
      wood_b_ = k / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + k * k));
      wood_x0_ = (1.0 - wood_b_) / (1.0 + wood_b_);
      wood_c_ = kappa * wood_x0_ + k * std::log(1.0 - wood_x0_ * wood_x0_);
    }
  }
}

UtilityPoint Culture::draw_vmf(RandomStream& stream) const {
  const auto pole = spec_.pole_point().values();
  const std::size_t m = spec_.m;
  const double kappa = spec_.kappa;
  if (m == 2) {
    // S^0 = {pole, -pole}: P(pole) = e^k / (e^k + e^-k).
    const bool at_pole = stream.uniform() < 1.0 / (1.0 + std::exp(-2.0 * kappa));
    return at_pole ? spec_.pole_point() : invert(spec_.pole_point());
  }
  const std::size_t k = m - 2;
  const double kd = static_cast<double>(k);
  double w = 0.0;
  while (true) {
    // Beta(k/2, k/2) as a ratio of two chi-square(k) variables.
    double x = 0.0;
    double y = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double a = stream.normal();
      x += a * a;
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double a = stream.normal();
      y += a * a;
    }
    const double z = x / (x + y);
    const double u = stream.uniform();
    w = (1.0 - (1.0 + wood_b_) * z) / (1.0 - (1.0 - wood_b_) * z);
    if (kappa * w + kd * std::log(1.0 - wood_x0_ * w) - wood_c_ >= std::log(u)) break;
  }
  // Uniform tangent direction in the basis vectors orthogonal to the pole.
  std::vector<double> t;
  double len = 0.0;
  do {
    t = stream.normals(k);
    len = norm(t);
  } while (len < 1e-300);
  const double radial = std::sqrt(std::max(0.0, 1.0 - w * w));
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = w * pole[i];
  for (std::size_t j = 0; j < k; ++j) {
    const double c = radial * t[j] / len;
    for (std::size_t i = 0; i < m; ++i) out[i] += c * pole_basis_[j + 1][i];
  }
  return canonicalize(out, 1e-300);
}

UtilityPoint Culture::draw_point(RandomStream& stream) const {
  if (spec_.kind == CultureKind::Mallows) {
    fail(ErrorCode::InvalidSpec, "Mallows draws orders, not utility points");
  }
  if (stream.uniform() < spec_.indifference_prob) return UtilityPoint::indifference(spec_.m);
  if (spec_.kind == CultureKind::Uniform) return sample_uniform(spec_.m, stream);
  return draw_vmf(stream);
}

PreferenceOrder Culture::draw_order(RandomStream& stream) const {
  if (spec_.kind != CultureKind::Mallows) {
    fail(ErrorCode::InvalidSpec, "only the Mallows culture draws orders");
  }
  if (stream.uniform() < spec_.indifference_prob) return all_tied(spec_.m);
  return repeated_insertion(spec_.pole_order().ranking(), spec_.kappa, stream);
}

UtilityPoint sample_vmf(const CultureSpec& spec, RandomStream& stream) {
  require_kind(spec, CultureKind::VMF);
  CultureSpec plain = spec;
  plain.indifference_prob = 0.0;
  return Culture(std::move(plain)).draw_point(stream);
}

Population sample_population(const CultureSpec& spec, std::size_t n, std::size_t threads) {
  const Culture culture(spec);
  Population pop;
  pop.m = spec.m;
  pop.ordinal = spec.kind == CultureKind::Mallows;
  if (pop.ordinal) {
    pop.orders.assign(n, all_tied(spec.m));
  } else {
    pop.points.assign(n, UtilityPoint::indifference(spec.m));
  }

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream stream = RandomStream::substream(spec.seed, i);
      if (pop.ordinal) {
        pop.orders[i] = culture.draw_order(stream);
      } else {
        pop.points[i] = culture.draw_point(stream);
      }
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n / 256));
  if (threads == 1) {
    work(0, n);
    return pop;
  }
  std::vector<std::thread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(work, begin, end);
  }
  for (auto& w : workers) w.join();
  return pop;
}

}  // namespace utilgeo
