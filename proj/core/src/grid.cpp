#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tarkit/error.hpp"
#include "tarkit/sweep.hpp"

namespace tarkit {

std::size_t ParameterGrid::size() const {
  return stemming.size() * ngram_orders.size() * value_types.size() * token_counts.size() *
         sampling_percentages.size() * algorithms.size();
}

void ParameterGrid::validate() const {
  if (stemming.empty() || ngram_orders.empty() || value_types.empty() ||
      token_counts.empty() || sampling_percentages.empty() || algorithms.empty())
    throw ParameterError("every grid dimension must be non-empty");
  for (int n : ngram_orders)
    if (n < 1) throw ParameterError("ngram order must be >= 1, got " + std::to_string(n));
  for (int k : token_counts)
    if (k < 1) throw ParameterError("token count must be >= 1, got " + std::to_string(k));
  for (double p : sampling_percentages)
    if (!(p > 0.0 && p <= 100.0))
      throw ParameterError("sampling percentage must be in (0, 100], got " +
                           std::to_string(p));
  if (cost <= 0) throw ParameterError("C must be positive");
  if (tolerance < 0) throw ParameterError("tolerance must be >= 0");
  if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string v = trim(item);
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

long parse_int(const std::string& v, const std::string& context) {
  long value = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError(context + ": not an integer: \"" + v + "\"");
  return value;
}

double parse_number(const std::string& v, const std::string& context) {
  try {
    std::size_t pos = 0;
    double value = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return value;
  } catch (const std::exception&) {
    throw ParseError(context + ": not a number: \"" + v + "\"");
  }
}

bool parse_flag(const std::string& v, const std::string& context) {
  if (v == "yes" || v == "true" || v == "on" || v == "1") return true;
  if (v == "no" || v == "false" || v == "off" || v == "0") return false;
  throw ParseError(context + ": not a yes/no value: \"" + v + "\"");
}

// De-duplicate while preserving the listed order; the listing order is the
// enumeration order.
template <typename T>
std::vector<T> unique_keep_order(std::vector<T> values) {
  std::vector<T> out;
  for (const T& v : values)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

}  // namespace

ParameterGrid parse_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open grid file: " + path.string());
  const std::string file = path.filename().string();

  ParameterGrid grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::string context = file + ":" + std::to_string(line_no);

    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(context + ": expected `key = value, ...`");
    const std::string key = trim(stripped.substr(0, eq));
    std::vector<std::string> values = split_values(stripped.substr(eq + 1));
    if (values.empty()) throw ParseError(context + ": key \"" + key + "\" has no values");

    auto single = [&]() -> const std::string& {
      if (values.size() != 1)
        throw ParseError(context + ": key \"" + key + "\" takes a single value");
      return values[0];
    };

    if (key == "stemming") {
      grid.stemming.clear();
      for (const auto& v : values) grid.stemming.push_back(parse_flag(v, context));
      grid.stemming = unique_keep_order(std::move(grid.stemming));
    } else if (key == "ngrams") {
      grid.ngram_orders.clear();
      for (const auto& v : values)
        grid.ngram_orders.push_back(static_cast<int>(parse_int(v, context)));
      grid.ngram_orders = unique_keep_order(std::move(grid.ngram_orders));
    } else if (key == "value_types") {
      grid.value_types.clear();
      for (const auto& v : values) {
        try {
          grid.value_types.push_back(parse_token_value_type(v));
        } catch (const ParseError& e) {
          throw ParseError(context + ": " + e.what());
        }
      }
      grid.value_types = unique_keep_order(std::move(grid.value_types));
    } else if (key == "tokens") {
      grid.token_counts.clear();
      for (const auto& v : values)
        grid.token_counts.push_back(static_cast<int>(parse_int(v, context)));
      grid.token_counts = unique_keep_order(std::move(grid.token_counts));
    } else if (key == "sampling") {
      grid.sampling_percentages.clear();
      for (const auto& v : values)
        grid.sampling_percentages.push_back(parse_number(v, context));
      grid.sampling_percentages = unique_keep_order(std::move(grid.sampling_percentages));
    } else if (key == "algorithms") {
      grid.algorithms.clear();
      for (const auto& v : values) {
        try {
          grid.algorithms.push_back(parse_algorithm(v));
        } catch (const ParseError& e) {
          throw ParseError(context + ": " + e.what());
        }
      }
      grid.algorithms = unique_keep_order(std::move(grid.algorithms));
    } else if (key == "seed") {
      grid.seed = static_cast<std::uint64_t>(parse_int(single(), context));
    } else if (key == "c") {
      grid.cost = parse_number(single(), context);
    } else if (key == "tolerance") {
      grid.tolerance = parse_number(single(), context);
    } else if (key == "max_iterations") {
      grid.max_iterations = static_cast<int>(parse_int(single(), context));
    } else {
      throw ParseError(context + ": unknown key \"" + key + "\"");
    }
  }

  grid.validate();
  return grid;
}

std::string ExperimentConfig::describe() const {
  std::ostringstream out;
  out << "stemming=" << (stemming ? "yes" : "no") << " ngrams=" << ngram_order
      << " value_type=" << to_string(value_type) << " tokens=" << token_count
      << " sampling=" << sampling_percentage << " algorithm=" << to_string(algorithm)
      << " seed=" << seed;
  return out.str();
}

std::vector<ExperimentConfig> enumerate_grid(const ParameterGrid& grid) {
  grid.validate();
  std::vector<ExperimentConfig> configs;
  configs.reserve(grid.size());
  std::size_t index = 0;
  for (bool stem : grid.stemming)
    for (int n : grid.ngram_orders)
      for (TokenValueType vt : grid.value_types)
        for (int k : grid.token_counts)
          for (double pct : grid.sampling_percentages)
            for (AlgorithmChoice algo : grid.algorithms) {
              ExperimentConfig c;
              c.stemming = stem;
              c.ngram_order = n;
              c.value_type = vt;
              c.token_count = k;
              c.sampling_percentage = pct;
              c.algorithm = algo;
              c.seed = grid.seed;
              c.cost = grid.cost;
              c.tolerance = grid.tolerance > 0 ? grid.tolerance : default_tolerance(algo);
              c.max_iterations = grid.max_iterations;
              c.index = index++;
              configs.push_back(std::move(c));
            }
  return configs;
}

}  // namespace tarkit
