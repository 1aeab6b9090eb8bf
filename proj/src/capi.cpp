#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "utilgeo/cultures.hpp"
#include "utilgeo/errors.hpp"
#include "utilgeo/geometry.hpp"
#include "utilgeo/lottery.hpp"
#include "utilgeo/ordinal.hpp"
#include "utilgeo/population_io.hpp"
#include "utilgeo/stats.hpp"
#include "utilgeo/utilgeo.h"

struct ug_culture {
  utilgeo::CultureSpec spec;
};

struct ug_population {
  utilgeo::Population pop;
};

namespace {

thread_local std::string last_error;

ug_status to_status(utilgeo::ErrorCode code) {
  using utilgeo::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return UG_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return UG_ERR_DIMENSION_MISMATCH;
    case ErrorCode::IndifferencePoint: return UG_ERR_INDIFFERENCE_POINT;
    case ErrorCode::NonStrictOrder: return UG_ERR_NON_STRICT_ORDER;
    case ErrorCode::SizeLimit: return UG_ERR_SIZE_LIMIT;
    case ErrorCode::InvalidSpec: return UG_ERR_INVALID_SPEC;
    case ErrorCode::EmptyPopulation: return UG_ERR_EMPTY_POPULATION;
    case ErrorCode::DegenerateMean: return UG_ERR_DEGENERATE_MEAN;
    case ErrorCode::InfiniteRatio: return UG_ERR_INFINITE_RATIO;
    case ErrorCode::Io: return UG_ERR_IO;
    case ErrorCode::Parse: return UG_ERR_PARSE;
  }
  return UG_ERR_INTERNAL;
}

ug_status set_error(ug_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
ug_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const utilgeo::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(UG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(UG_ERR_INTERNAL, e.what());
  }
}

ug_status null_argument(const char* name) {
  return set_error(UG_ERR_INVALID_ARGUMENT, std::string(name) + " is NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<utilgeo::UtilityPoint> canonical_set(const double* set, std::size_t count,
                                                 std::size_t m) {
  std::vector<utilgeo::UtilityPoint> points;
  points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    points.push_back(utilgeo::canonicalize(std::span<const double>(set + k * m, m)));
  }
  return points;
}

}  // namespace

extern "C" {

const char* ug_last_error(void) { return last_error.c_str(); }

const char* ug_status_name(ug_status status) {
  switch (status) {
    case UG_OK: return "ok";
    case UG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case UG_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case UG_ERR_INDIFFERENCE_POINT: return "indifference point";
    case UG_ERR_NON_STRICT_ORDER: return "non-strict order";
    case UG_ERR_SIZE_LIMIT: return "size limit";
    case UG_ERR_INVALID_SPEC: return "invalid culture spec";
    case UG_ERR_EMPTY_POPULATION: return "empty population";
    case UG_ERR_DEGENERATE_MEAN: return "degenerate mean";
    case UG_ERR_INFINITE_RATIO: return "infinite ratio";
    case UG_ERR_IO: return "i/o error";
    case UG_ERR_PARSE: return "parse error";
    case UG_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case UG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ug_string_free(char* s) { std::free(s); }

ug_status ug_canonicalize(const double* u, size_t m, double tol, double* out, int* indifferent) {
  if (u == nullptr) return null_argument("u");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const auto x = utilgeo::canonicalize(std::span<const double>(u, m), tol);
    std::copy(x.values().begin(), x.values().end(), out);
    if (indifferent != nullptr) *indifferent = x.is_indifference() ? 1 : 0;
    return UG_OK;
  });
}

ug_status ug_distance(const double* u, const double* v, size_t m, ug_metric metric, double* out) {
  if (u == nullptr) return null_argument("u");
  if (v == nullptr) return null_argument("v");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const auto x = utilgeo::canonicalize(std::span<const double>(u, m));
    const auto y = utilgeo::canonicalize(std::span<const double>(v, m));
    switch (metric) {
      case UG_METRIC_ROUND: *out = utilgeo::distance(x, y); break;
      case UG_METRIC_CUBE3: *out = utilgeo::cube_distance_m3(x, y); break;
      default: return set_error(UG_ERR_INVALID_ARGUMENT, "unknown metric");
    }
    return UG_OK;
  });
}

ug_status ug_sum_contains(const double* set, size_t count, size_t m, const double* v,
                          int* contains) {
  if (set == nullptr && count > 0) return null_argument("set");
  if (v == nullptr) return null_argument("v");
  if (contains == nullptr) return null_argument("contains");
  return guarded([&] {
    const auto A = canonical_set(set, count, m);
    *contains = utilgeo::sum_contains(A, utilgeo::canonicalize(std::span<const double>(v, m))) ? 1 : 0;
    return UG_OK;
  });
}

ug_status ug_unanimity_oracle(const double* set, size_t count, size_t m, const double* v,
                              size_t grid_resolution, int* holds) {
  if (set == nullptr && count > 0) return null_argument("set");
  if (v == nullptr) return null_argument("v");
  if (holds == nullptr) return null_argument("holds");
  return guarded([&] {
    const auto A = canonical_set(set, count, m);
    const auto x = utilgeo::canonicalize(std::span<const double>(v, m));
    *holds = utilgeo::unanimity_oracle(A, x, grid_resolution) ? 1 : 0;
    return UG_OK;
  });
}

ug_status ug_order_string(const double* u, size_t m, double tie_tol, char* buf, size_t buflen) {
  if (u == nullptr) return null_argument("u");
  if (buf == nullptr) return null_argument("buf");
  return guarded([&] {
    const auto text = utilgeo::to_order(utilgeo::canonicalize(std::span<const double>(u, m)), tie_tol).to_string();
    if (text.size() + 1 > buflen) {
      return set_error(UG_ERR_BUFFER_TOO_SMALL,
                       "order string needs " + std::to_string(text.size() + 1) + " bytes");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return UG_OK;
  });
}

ug_status ug_culture_from_json(const char* json, ug_culture** out) {
  if (json == nullptr) return null_argument("json");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ug_culture{utilgeo::CultureSpec::from_json(json)};
    return UG_OK;
  });
}

ug_status ug_culture_to_json(const ug_culture* culture, char** json_out) {
  if (culture == nullptr) return null_argument("culture");
  if (json_out == nullptr) return null_argument("json_out");
  return guarded([&] {
    *json_out = copy_string(culture->spec.to_json());
    return UG_OK;
  });
}

void ug_culture_destroy(ug_culture* culture) { delete culture; }

ug_status ug_population_generate(const ug_culture* culture, size_t n, size_t threads,
                                 ug_population** out) {
  if (culture == nullptr) return null_argument("culture");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto pop = utilgeo::sample_population(culture->spec, n, threads == 0 ? 1 : threads);
    *out = new ug_population{std::move(pop)};
    return UG_OK;
  });
}

ug_status ug_population_read(const char* path, ug_population** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ug_population{utilgeo::read_population_file(path)};
    return UG_OK;
  });
}

ug_status ug_population_write(const ug_population* pop, const char* path, ug_format format) {
  if (pop == nullptr) return null_argument("pop");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    const auto fmt = format == UG_FORMAT_CSV ? utilgeo::RecordFormat::Csv : utilgeo::RecordFormat::Jsonl;
    if (format != UG_FORMAT_CSV && format != UG_FORMAT_JSONL) {
      return set_error(UG_ERR_INVALID_ARGUMENT, "unknown record format");
    }
    utilgeo::write_population_file(pop->pop, path, fmt);
    return UG_OK;
  });
}

size_t ug_population_size(const ug_population* pop) { return pop == nullptr ? 0 : pop->pop.size(); }

size_t ug_population_candidates(const ug_population* pop) { return pop == nullptr ? 0 : pop->pop.m; }

void ug_population_destroy(ug_population* pop) { delete pop; }

ug_status ug_stats_report(const ug_population* pop, const ug_stats_options* options, char** json_out) {
  if (pop == nullptr) return null_argument("pop");
  if (json_out == nullptr) return null_argument("json_out");
  return guarded([&] {
    utilgeo::ReportOptions opts;
    if (options != nullptr) {
      opts.tie_tol = options->tie_tol;
      if (options->ball_center != nullptr) {
        opts.ball_center = utilgeo::canonicalize(
            std::span<const double>(options->ball_center, options->center_m));
        opts.ball_radius = options->ball_radius;
      }
    }
    *json_out = copy_string(utilgeo::stats_report(pop->pop, opts));
    return UG_OK;
  });
}

}  // extern "C"
