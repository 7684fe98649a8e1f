#include "lsf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lsf/distribution.hpp"
#include "lsf/error.hpp"

namespace lsf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::parse_error,
              "bad value for " + std::string(key) + ": '" + std::string(value) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view value) {
  std::vector<T> out;
  for (auto item : split_list(value)) out.push_back(parse_number<T>(key, item));
  return out;
}

// Shortest text that reads back to the same double.
std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += fmt(items[i]);
  }
  return out;
}

std::string num(std::uint64_t x) { return std::to_string(x); }

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "algorithms") {
    algorithms.clear();
    for (auto item : split_list(value)) {
      const auto a = parse_algorithm(item);
      if (!a) bad_value(key, item);
      algorithms.push_back(*a);
    }
  } else if (key == "k") {
    k = parse_number<Degree>(key, value);
  } else if (key == "m") {
    m = parse_list<Degree>(key, value);
  } else if (key == "gamma") {
    gamma = parse_list<double>(key, value);
  } else if (key == "n") {
    n = parse_number<std::size_t>(key, value);
  } else if (key == "search_n") {
    search_n = parse_number<std::size_t>(key, value);
  } else if (key == "seeds") {
    seeds = parse_list<std::uint64_t>(key, value);
  } else if (key == "search") {
    search_kinds.clear();
    for (auto item : split_list(value)) {
      const auto s = parse_search_kind(item);
      if (!s) bad_value(key, item);
      search_kinds.push_back(*s);
    }
  } else if (key == "ttl_min") {
    ttl_min = parse_number<std::uint32_t>(key, value);
  } else if (key == "ttl_max") {
    ttl_max = parse_number<std::uint32_t>(key, value);
  } else if (key == "trials") {
    trials = parse_number<std::uint64_t>(key, value);
  } else if (key == "fanout") {
    fanout = parse_number<Degree>(key, value);
  } else if (key == "rw_normalized") {
    rw_normalized = parse_bool(key, value);
  } else if (key == "overhead_points") {
    overhead_points = parse_list<std::size_t>(key, value);
  } else if (key == "overhead_window") {
    overhead_window = parse_number<std::size_t>(key, value);
  } else if (key == "fit_min") {
    fit_min = parse_number<Degree>(key, value);
  } else if (key == "fit_max") {
    fit_max = parse_number<Degree>(key, value);
  } else if (key == "include_cutoff") {
    include_cutoff = parse_bool(key, value);
  } else if (key == "maxm_k") {
    maxm_k = parse_list<Degree>(key, value);
  } else if (key == "maxm_gamma_min") {
    maxm_gamma_min = parse_number<double>(key, value);
  } else if (key == "maxm_gamma_max") {
    maxm_gamma_max = parse_number<double>(key, value);
  } else if (key == "maxm_gamma_step") {
    maxm_gamma_step = parse_number<double>(key, value);
  } else if (key == "workers") {
    workers = parse_number<unsigned>(key, value);
  } else if (key == "output_dir") {
    output_dir = std::string(value);
  } else if (key == "write_graphs") {
    write_graphs = parse_bool(key, value);
  } else {
    throw Error(ErrorCode::parse_error, "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  auto alg = [](Algorithm a) { return std::string(algorithm_name(a)); };
  auto kind = [](SearchKind s) { return std::string(search_kind_name(s)); };
  auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };
  return {
      {"algorithms", join(algorithms, alg)},
      {"k", num(k)},
      {"m", join(m, num)},
      {"gamma", join(gamma, format_double)},
      {"n", num(n)},
      {"search_n", num(search_n)},
      {"seeds", join(seeds, num)},
      {"search", join(search_kinds, kind)},
      {"ttl_min", num(ttl_min)},
      {"ttl_max", num(ttl_max)},
      {"trials", num(trials)},
      {"fanout", num(fanout)},
      {"rw_normalized", boolean(rw_normalized)},
      {"overhead_points", join(overhead_points, num)},
      {"overhead_window", num(overhead_window)},
      {"fit_min", num(fit_min)},
      {"fit_max", num(fit_max)},
      {"include_cutoff", boolean(include_cutoff)},
      {"maxm_k", join(maxm_k, num)},
      {"maxm_gamma_min", format_double(maxm_gamma_min)},
      {"maxm_gamma_max", format_double(maxm_gamma_max)},
      {"maxm_gamma_step", format_double(maxm_gamma_step)},
      {"workers", num(workers)},
      {"output_dir", output_dir},
      {"write_graphs", boolean(write_graphs)},
  };
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [key, value] : entries()) out += key + " = " + value + "\n";
  return out;
}

Degree ExperimentConfig::effective_fit_max(Degree cutoff) const noexcept {
  if (fit_max != 0) return fit_max;
  return include_cutoff ? cutoff : cutoff - 1;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (seeds.empty()) fail("seeds must not be empty");
  if (algorithms.empty()) fail("algorithms must not be empty");
  if (m.empty()) fail("m must not be empty");
  if (k < 1) fail("k must be at least 1");
  if (ttl_min > ttl_max) fail("ttl_min exceeds ttl_max");
  if (search_n != 0 && trials == 0) fail("trials must be positive");
  if (workers == 0) fail("workers must be positive");
  if (maxm_gamma_step <= 0.0) fail("maxm_gamma_step must be positive");
  for (Degree cutoff : m) {
    if (cutoff < 2 * k) fail("m must be at least 2k");
    const std::size_t seed_nodes = 2 * static_cast<std::size_t>(k) + 1;
    if (n < seed_nodes) fail("n must be at least 2k+1");
    if (search_n != 0 && search_n < seed_nodes) fail("search_n must be 0 or at least 2k+1");
    if (effective_fit_min() >= effective_fit_max(cutoff)) fail("fit range is empty");
  }
  bool needs_gamma = false;
  for (Algorithm a : algorithms) needs_gamma |= uses_exponent(a);
  if (!needs_gamma) return;
  if (gamma.empty()) fail("gamma must not be empty");
  for (Degree cutoff : m) {
    for (double g : gamma) lsf::validate(DistributionSpec{k, cutoff, g});
  }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lsf
