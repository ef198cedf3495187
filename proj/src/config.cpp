#include "ptx/config.hpp"

#include "ptx/csv.hpp"
#include "ptx/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ptx {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
  }
  return value;
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
  }
  return value;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, text));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view key, std::string_view text, Parse parse) {
  std::vector<T> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) {
      throw ConfigError(fmt::format("{}: empty list element", key));
    }
    out.push_back(static_cast<T>(parse(key, item)));
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) {
    throw ConfigError(fmt::format("{}: empty list", key));
  }
  return out;
}

void require(bool ok, std::string_view key, std::string_view what) {
  if (!ok) {
    throw ConfigError(fmt::format("{}: {}", key, what));
  }
}

struct GridSpec {
  double lo = 1e-3;
  double hi = 1.0;
  int points = 9;
  bool explicit_grid = false;
};

using Setter = std::function<void(ExperimentConfig&, GridSpec&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"experiment",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         try {
           c.experiment = parse_experiment(v);
         } catch (const ConfigError&) {
           throw ConfigError(fmt::format("{}: unknown experiment '{}'", k, v));
         }
       }},
      {"Ng_a",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 2, k, "dimension must be at least 2");
         c.ensemble.reservoir_a.size = n;
       }},
      {"Ng_b",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 2, k, "dimension must be at least 2");
         c.ensemble.reservoir_b.size = n;
       }},
      {"v_a",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.reservoir_a.v = parse_double(k, v);
         require(c.ensemble.reservoir_a.v > 0.0, k, "must be positive");
       }},
      {"v_b",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.reservoir_b.v = parse_double(k, v);
         require(c.ensemble.reservoir_b.v > 0.0, k, "must be positive");
       }},
      {"Gamma_a",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.reservoir_a.gamma = parse_double(k, v);
         require(c.ensemble.reservoir_a.gamma > 0.0, k, "must be positive");
       }},
      {"Gamma_b",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.reservoir_b.gamma = parse_double(k, v);
         require(c.ensemble.reservoir_b.gamma > 0.0, k, "must be positive");
       }},
      {"v2",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.channel.v2 = parse_double(k, v);
         require(c.ensemble.channel.v2 >= 0.0, k, "must be non-negative");
       }},
      {"v3",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.channel.v3 = parse_double(k, v);
         require(c.ensemble.channel.v3 >= 0.0, k, "must be non-negative");
       }},
      {"v4",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.channel.v4 = parse_double(k, v);
         require(c.ensemble.channel.v4 >= 0.0, k, "must be non-negative");
       }},
      {"t1",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.channel.t1 = parse_double(k, v);
         require(c.ensemble.channel.t1 != 0.0, k, "must be nonzero");
       }},
      {"t2",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.channel.t2 = parse_double(k, v);
       }},
      {"energy",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.channel.energy = parse_double(k, v);
       }},
      {"n_runs",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 2 && n <= 1'000'000, k, "must be between 2 and 10^6");
         c.ensemble.n_runs = static_cast<int>(n);
       }},
      {"n_samples",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 10 && n <= 100'000'000, k, "must be between 10 and 10^8");
         c.ensemble.n_samples = static_cast<int>(n);
       }},
      {"n_bins",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 5 && n <= 100'000, k, "must be between 5 and 10^5");
         c.ensemble.histogram.n_bins = static_cast<int>(n);
       }},
      {"hist_max",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.histogram.x_max = parse_double(k, v);
         require(c.ensemble.histogram.x_max > 0.0, k, "must be positive");
       }},
      {"seed",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.ensemble.master_seed = parse_uint(k, v);
       }},
      {"workers",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 0 && n <= 4096, k, "must be between 0 (all cores) and 4096");
         c.ensemble.workers = static_cast<unsigned>(n);
       }},
      {"out_dir",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         require(!v.empty(), k, "must not be empty");
         c.out_dir = std::string(v);
       }},
      {"gamma_min",
       [](ExperimentConfig&, GridSpec& g, std::string_view k, std::string_view v) {
         g.lo = parse_double(k, v);
         require(g.lo > 0.0, k, "must be positive");
       }},
      {"gamma_max",
       [](ExperimentConfig&, GridSpec& g, std::string_view k, std::string_view v) {
         g.hi = parse_double(k, v);
         require(g.hi > 0.0, k, "must be positive");
       }},
      {"gamma_points",
       [](ExperimentConfig&, GridSpec& g, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 1 && n <= 1000, k, "must be between 1 and 1000");
         g.points = static_cast<int>(n);
       }},
      {"gamma_grid",
       [](ExperimentConfig& c, GridSpec& g, std::string_view k, std::string_view v) {
         c.gamma_grid = parse_list<double>(k, v, parse_double);
         for (double x : c.gamma_grid) {
           require(x > 0.0, k, "every value must be positive");
         }
         g.explicit_grid = true;
       }},
      {"table2_sizes",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.table2_sizes = parse_list<Eigen::Index>(k, v, parse_int);
         for (auto n : c.table2_sizes) {
           require(n >= 2, k, "every size must be at least 2");
         }
       }},
      {"table2_samples",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         require(n >= 2 && n <= 10'000'000, k, "must be between 2 and 10^7");
         c.table2_samples = static_cast<int>(n);
       }},
      {"high_statistics",
       [](ExperimentConfig& c, GridSpec&, std::string_view k, std::string_view v) {
         c.high_statistics = parse_bool(k, v);
       }},
  };
  return table;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::fig1:
      return "fig1";
    case Experiment::fig2:
      return "fig2";
    case Experiment::fig3:
      return "fig3";
    case Experiment::table2:
      return "table2";
    case Experiment::integrals:
      return "integrals";
    case Experiment::custom:
      return "custom";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::fig1, Experiment::fig2, Experiment::fig3, Experiment::table2, Experiment::integrals,
                 Experiment::custom}) {
    if (to_string(e) == name) {
      return e;
    }
  }
  throw ConfigError(fmt::format("unknown experiment '{}'", name));
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  GridSpec grid;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(fmt::format("line {}: missing key", line_no));
    }
    if (value.empty()) {
      throw ConfigError(fmt::format("line {}: {}: missing value", line_no, key));
    }
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    if (const auto [pos, inserted] = seen.emplace(std::string(key), line_no); !inserted) {
      throw ConfigError(fmt::format("line {}: {}: already set on line {}", line_no, key, pos->second));
    }
    try {
      it->second(cfg, grid, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  if (!grid.explicit_grid) {
    require(grid.hi >= grid.lo, "gamma_max", "must not be below gamma_min");
    cfg.gamma_grid = log_grid(grid.lo, grid.hi, grid.points);
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& cfg) {
  try {
    cfg.ensemble.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(!cfg.gamma_grid.empty(), "gamma_grid", "must not be empty");
  require(!cfg.table2_sizes.empty(), "table2_sizes", "must not be empty");
  require(cfg.table2_sample_count() >= 2, "table2_samples", "must be at least 2");
}

std::string canonical_config(const ExperimentConfig& cfg) {
  using csv::number;
  const auto& e = cfg.ensemble;
  std::string grid;
  for (double g : cfg.gamma_grid) {
    grid += (grid.empty() ? "" : ",") + number(g);
  }
  std::string sizes;
  for (auto n : cfg.table2_sizes) {
    sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  }
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  put("experiment", to_string(cfg.experiment));
  put("Ng_a", std::to_string(e.reservoir_a.size));
  put("Ng_b", std::to_string(e.reservoir_b.size));
  put("v_a", number(e.reservoir_a.v));
  put("v_b", number(e.reservoir_b.v));
  put("Gamma_a", number(e.reservoir_a.gamma));
  put("Gamma_b", number(e.reservoir_b.gamma));
  put("v2", number(e.channel.v2));
  put("v3", number(e.channel.v3));
  put("v4", number(e.channel.v4));
  put("t1", number(e.channel.t1));
  put("t2", number(e.channel.t2));
  put("energy", number(e.channel.energy));
  put("n_runs", std::to_string(e.n_runs));
  put("n_samples", std::to_string(e.n_samples));
  put("n_bins", std::to_string(e.histogram.n_bins));
  put("hist_max", number(e.histogram.x_max));
  put("seed", std::to_string(e.master_seed));
  put("gamma_grid", grid);
  put("table2_sizes", sizes);
  put("table2_samples", std::to_string(cfg.table2_samples));
  put("high_statistics", cfg.high_statistics ? "true" : "false");
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : canonical_config(cfg)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace ptx
