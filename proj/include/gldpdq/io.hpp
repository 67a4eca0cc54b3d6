#pragma once

#include "gldpdq/gld.hpp"
#include "gldpdq/qdensity.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace gldpdq {

enum class NaPolicy
{
  skip,
  fail
};

//! Where to find a numeric column. `column` is a header name, or a 1-based
//! index when it is all digits.
struct DataSpec
{
  std::filesystem::path path;
  std::string column = "1";
  bool has_header = false;
  NaPolicy na_policy = NaPolicy::skip;
};

//! Reads one numeric column from comma-separated text. Empty fields and "NA"
//! count as missing. Throws DataError.
std::vector<double> read_column(std::istream& in, const DataSpec& spec);
std::vector<double> read_column(const DataSpec& spec);

//! read_column followed by SortedSample, so fewer than 10 values is an error.
SortedSample load_sample(const DataSpec& spec);

//! Parses "l1,l2,l3,l4". Throws DomainError.
GldParams parse_params_list(const std::string& text);

//! Reads {"lambda1":..,"lambda2":..,"lambda3":..,"lambda4":..}, which is also
//! the shape of fit output. Throws DataError.
GldParams read_params_file(const std::filesystem::path& path);

} // namespace gldpdq
