#include "utilgeo/population_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "utilgeo/errors.hpp"

namespace utilgeo {

namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct RecordView {
  const UtilityPoint* point = nullptr;
  PreferenceOrder order;
  std::string cell;
};

RecordView describe(const Population& pop, std::size_t i, double tie_tol) {
  if (pop.ordinal) {
    const auto& o = pop.orders[i];
    const bool indifferent = o.tiers().size() == 1;
    return {nullptr, o, indifferent ? "Indifference" : to_string(cell_kind(o))};
  }
  const auto& x = pop.points[i];
  auto order = to_order(x, tie_tol);
  std::string cell = x.is_indifference() ? "Indifference" : to_string(cell_kind(order));
  return {&x, std::move(order), std::move(cell)};
}

UtilityPoint decode_point(std::vector<double> u, bool indifferent) {
  if (indifferent) return UtilityPoint::indifference(u.size());
  try {
    return UtilityPoint::from_canonical(u);
  } catch (const Error&) {
    return canonicalize(u);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "bad number '" + text + "'");
  }
  if (used != text.size()) fail(ErrorCode::Parse, "bad number '" + text + "'");
  return x;
}

void add_record(Population& pop, bool& first, std::optional<std::vector<double>> u,
                const std::string& order_text, const std::string& cell) {
  const bool ordinal = !u.has_value();
  const bool indifferent = cell == "Indifference";
  if (first) {
    pop.ordinal = ordinal;
    first = false;
  } else if (pop.ordinal != ordinal) {
    fail(ErrorCode::Parse, "file mixes utility and order records");
  }
  if (ordinal) {
    auto order = PreferenceOrder::parse(order_text);
    if (pop.m == 0) pop.m = order.candidates();
    if (order.candidates() != pop.m) fail(ErrorCode::Parse, "records disagree on m");
    pop.orders.push_back(std::move(order));
  } else {
    if (pop.m == 0) pop.m = u->size();
    if (u->size() != pop.m || pop.m == 0) fail(ErrorCode::Parse, "records disagree on m");
    pop.points.push_back(decode_point(std::move(*u), indifferent));
  }
}

}  // namespace

RecordFormat parse_record_format(const std::string& text) {
  if (text == "jsonl") return RecordFormat::Jsonl;
  if (text == "csv") return RecordFormat::Csv;
  fail(ErrorCode::InvalidArgument, "unknown record format '" + text + "'");
}

void write_population(const Population& pop, std::ostream& out, RecordFormat format,
                      double tie_tol) {
  const std::size_t n = pop.size();
  if (format == RecordFormat::Csv) {
    out << "id,order,cell";
    for (std::size_t i = 0; i < pop.m; ++i) out << ",u" << (i + 1);
    out << '\n';
  }
  for (std::size_t id = 0; id < n; ++id) {
    const auto rec = describe(pop, id, tie_tol);
    if (format == RecordFormat::Jsonl) {
      out << "{\"id\":" << id << ",\"u\":";
      if (rec.point == nullptr) {
        out << "null";
      } else {
        out << '[';
        for (std::size_t i = 0; i < pop.m; ++i) {
          if (i > 0) out << ',';
          out << format_real((*rec.point)[i]);
        }
        out << ']';
      }
      out << ",\"order\":\"" << rec.order.to_string() << "\",\"cell\":\"" << rec.cell << "\"}\n";
    } else {
      out << id << ',' << rec.order.to_string() << ',' << rec.cell;
      for (std::size_t i = 0; i < pop.m; ++i) {
        out << ',';
        if (rec.point != nullptr) out << format_real((*rec.point)[i]);
      }
      out << '\n';
    }
  }
}

void write_population_file(const Population& pop, const std::string& path, RecordFormat format,
                           double tie_tol) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_population(pop, out, format, tie_tol);
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

Population read_population(std::istream& in) {
  Population pop;
  bool first = true;
  std::string line;
  std::optional<RecordFormat> format;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!format) {
      if (line.front() == '{') {
        format = RecordFormat::Jsonl;
      } else if (line.rfind("id,order,cell", 0) == 0) {
        format = RecordFormat::Csv;
        continue;
      } else {
        fail(ErrorCode::Parse, "unrecognized population file (line 1)");
      }
    }
    try {
      if (*format == RecordFormat::Jsonl) {
        const auto j = nlohmann::json::parse(line);
        std::optional<std::vector<double>> u;
        if (!j.at("u").is_null()) u = j.at("u").get<std::vector<double>>();
        add_record(pop, first, std::move(u), j.at("order").get<std::string>(),
                   j.value("cell", std::string()));
      } else {
        const auto fields = split_csv(line);
        if (fields.size() < 3) fail(ErrorCode::Parse, "short CSV record");
        std::optional<std::vector<double>> u;
        if (fields.size() > 3 && !fields[3].empty()) {
          u.emplace();
          for (std::size_t k = 3; k < fields.size(); ++k) u->push_back(parse_real(fields[k]));
        }
        add_record(pop, first, std::move(u), fields[1], fields[2]);
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pop;
}

Population read_population_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return read_population(in);
}

}  // namespace utilgeo
