#include "gldpdq/io.hpp"

#include "gldpdq/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gldpdq {

namespace {

std::string_view trim(std::string_view s)
{
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  const auto b = std::find_if(s.begin(), s.end(), not_space);
  const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b)) : std::string_view();
}

std::string_view unquote(std::string_view s)
{
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(unquote(trim(line.substr(start, comma - start))));
    if (comma == std::string_view::npos)
      return out;
    start = comma + 1;
  }
}

bool all_digits(std::string_view s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool parse_double(std::string_view s, double& out)
{
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

std::vector<double> read_column(std::istream& in, const DataSpec& spec)
{
  std::string line;
  std::size_t line_no = 0;
  std::size_t index = 0;
  bool have_index = false;

  if (!spec.has_header) {
    if (!all_digits(spec.column))
      throw DataError("column '" + spec.column + "' is a name but the input has no header");
    index = std::stoul(spec.column);
    have_index = true;
  } else {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty())
        break;
    }
    if (trim(line).empty())
      throw DataError("input is empty");
    const auto names = split(line);
    const auto it = std::find(names.begin(), names.end(), std::string_view(spec.column));
    if (it != names.end()) {
      index = static_cast<std::size_t>(it - names.begin()) + 1;
      have_index = true;
    } else if (all_digits(spec.column)) {
      index = std::stoul(spec.column);
      have_index = index >= 1 && index <= names.size();
    }
    if (!have_index)
      throw DataError("column '" + spec.column + "' not found in header");
  }
  if (index == 0)
    throw DataError("column index is 1-based; got 0");

  std::vector<double> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split(line);
    if (index > fields.size())
      throw DataError("column '" + spec.column + "' missing on line " + std::to_string(line_no));
    const std::string_view field = fields[index - 1];
    if (field.empty() || field == "NA") {
      if (spec.na_policy == NaPolicy::fail)
        throw DataError("missing value on line " + std::to_string(line_no));
      continue;
    }
    double v = 0.0;
    if (!parse_double(field, v))
      throw DataError("non-numeric value '" + std::string(field) + "' on line " +
                      std::to_string(line_no));
    if (!std::isfinite(v))
      throw DataError("non-finite value on line " + std::to_string(line_no));
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_column(const DataSpec& spec)
{
  std::ifstream in(spec.path);
  if (!in)
    throw DataError("cannot open '" + spec.path.string() + "'");
  return read_column(in, spec);
}

SortedSample load_sample(const DataSpec& spec)
{
  return SortedSample(read_column(spec));
}

GldParams parse_params_list(const std::string& text)
{
  const auto fields = split(text);
  if (fields.size() != 4)
    throw DomainError("expected four comma-separated parameters, got " +
                      std::to_string(fields.size()));
  double v[4];
  for (std::size_t i = 0; i < 4; ++i)
    if (!parse_double(fields[i], v[i]))
      throw DomainError("parameter '" + std::string(fields[i]) + "' is not a number");
  return GldParams(v[0], v[1], v[2], v[3]);
}

GldParams read_params_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open '" + path.string() + "'");
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    return GldParams(j.at("lambda1").get<double>(), j.at("lambda2").get<double>(),
                     j.at("lambda3").get<double>(), j.at("lambda4").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad parameter file '" + path.string() + "': " + e.what());
  }
}

} // namespace gldpdq
