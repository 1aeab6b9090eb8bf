#pragma once

#include <iosfwd>
#include <string>

#include "utilgeo/cultures.hpp"
#include "utilgeo/ordinal.hpp"

namespace utilgeo {

enum class RecordFormat { Jsonl, Csv };

RecordFormat parse_record_format(const std::string& text);

// One record per agent, ordered by id. JSONL:
//   {"id":0,"u":[...],"order":"1>4>2=3","cell":"Facet"}
// CSV: header id,order,cell,u1..um. Reals use 17 significant digits.
// Ordinal populations write "u": null (empty CSV fields); indifferent
// agents get cell "Indifference" and a zero vector.
void write_population(const Population& pop, std::ostream& out, RecordFormat format,
                      double tie_tol = kDefaultTieTol);

// Throws Io when the file cannot be written.
void write_population_file(const Population& pop, const std::string& path,
                           RecordFormat format, double tie_tol = kDefaultTieTol);

// Reads either encoding (detected from the first non-empty line).
Population read_population(std::istream& in);
Population read_population_file(const std::string& path);

}  // namespace utilgeo
