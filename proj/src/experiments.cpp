#include "hivabm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hivabm {
namespace {

// 97.5th percentile of the standard normal, for two-sided 95% intervals.
constexpr double kZ95 = 1.96;

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  return out;
}

// Fixed two-decimal rendering for SVG coordinates; locale-independent and
// byte-stable across runs.
std::string coord(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

}  // namespace

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("aggregate: no values");
  }
  Aggregate agg;
  agg.n = values.size();
  agg.min = *std::min_element(values.begin(), values.end());
  agg.max = *std::max_element(values.begin(), values.end());

  double sum = 0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(agg.n);

  if (agg.n == 1) {
    agg.ci_low = agg.ci_high = agg.mean;
    return agg;
  }
  double sq = 0;
  for (double v : values) sq += (v - agg.mean) * (v - agg.mean);
  const double stddev = std::sqrt(sq / static_cast<double>(agg.n - 1));
  const double halfwidth =
      kZ95 * stddev / std::sqrt(static_cast<double>(agg.n));
  agg.ci_low = agg.mean - halfwidth;
  agg.ci_high = agg.mean + halfwidth;
  return agg;
}

const char* to_string(SweepParam param) {
  switch (param) {
    case SweepParam::Commitment: return "commitment";
    case SweepParam::CondomUsage: return "condom_usage";
  }
  return "?";
}

std::optional<SweepParam> sweep_param_from_string(const std::string& name) {
  if (name == "commitment") return SweepParam::Commitment;
  if (name == "condom_usage") return SweepParam::CondomUsage;
  return std::nullopt;
}

std::vector<CounterSnapshot> run_replicates(const SimConfig& cfg, int n,
                                            std::uint64_t base_seed,
                                            int threads) {
  if (n < 0) throw std::invalid_argument("run_replicates: n must be >= 0");
  {
    const std::vector<std::string> problems = validate_config(cfg);
    if (!problems.empty()) {
      throw std::invalid_argument("run_replicates: invalid config: " +
                                  problems.front());
    }
  }

  std::vector<CounterSnapshot> results(static_cast<std::size_t>(n));
  if (n == 0) return results;

  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, n);

  // Replicate i is a pure function of (cfg, base_seed + i) and lands in
  // results[i]; the work-stealing order cannot affect the output.
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      SimConfig replicate_cfg = cfg;
      replicate_cfg.seed = base_seed + static_cast<std::uint64_t>(i);
      const Trace trace = run(replicate_cfg);
      results[static_cast<std::size_t>(i)] =
          compute_counters(trace.final_state);
    }
  };

  if (threads == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return results;
}

SweepResult sweep(const SimConfig& base_cfg, SweepParam param,
                  const std::vector<Percent>& values, int replicates,
                  std::uint64_t base_seed, int threads) {
  if (replicates < 1) {
    throw std::invalid_argument("sweep: replicates must be >= 1");
  }
  SweepResult result;
  result.param = param;
  result.points.reserve(values.size());

  for (std::size_t p = 0; p < values.size(); ++p) {
    SimConfig cfg = base_cfg;
    if (param == SweepParam::Commitment) {
      cfg.commitment = values[p];
    } else {
      cfg.condom_usage = values[p];
    }
    const std::uint64_t point_seed =
        base_seed + static_cast<std::uint64_t>(p) *
                        static_cast<std::uint64_t>(replicates);

    SweepPoint point;
    point.param_value = values[p].value();
    point.replicates = run_replicates(cfg, replicates, point_seed, threads);
    point.seeds.reserve(static_cast<std::size_t>(replicates));
    for (int i = 0; i < replicates; ++i) {
      point.seeds.push_back(point_seed + static_cast<std::uint64_t>(i));
    }
    point.aggregates.reserve(kCounterFieldCount);
    std::vector<double> samples(point.replicates.size());
    for (const CounterField& field : counter_fields()) {
      for (std::size_t i = 0; i < point.replicates.size(); ++i) {
        samples[i] = static_cast<double>(point.replicates[i].*field.member);
      }
      point.aggregates.push_back(aggregate(samples));
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

std::string format_decimal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";

  // Round to 6 significant digits via the exponent form, then lay the
  // digits out as a plain decimal so no output ever goes scientific.
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.5e", value);
  const std::string sci = buf;
  const bool negative = sci[0] == '-';
  const std::size_t first = negative ? 1 : 0;
  const std::size_t e_pos = sci.find('e');
  std::string digits;
  digits += sci[first];
  digits += sci.substr(first + 2, e_pos - (first + 2));
  const int exponent = std::atoi(sci.c_str() + e_pos + 1);

  std::string out;
  const int point = exponent + 1;  // digit count left of the decimal point
  if (point <= 0) {
    out = "0.";
    out.append(static_cast<std::size_t>(-point), '0');
    out += digits;
  } else if (static_cast<std::size_t>(point) >= digits.size()) {
    out = digits;
    out.append(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(point)) + "." +
          digits.substr(static_cast<std::size_t>(point));
  }
  if (out.find('.') != std::string::npos) {
    out.erase(out.find_last_not_of('0') + 1);
    if (out.back() == '.') out.pop_back();
  }
  return negative ? "-" + out : out;
}

void export_sweep_csv(const SweepResult& result,
                      const std::string& path_prefix) {
  const char* param_name = to_string(result.param);

  std::ofstream reps = open_for_write(path_prefix + ".replicates.csv");
  reps << "param_name,param_value,replicate,seed,tick";
  for (const CounterField& field : counter_fields()) {
    reps << ',' << field.name;
  }
  reps << '\n';
  for (const SweepPoint& point : result.points) {
    for (std::size_t i = 0; i < point.replicates.size(); ++i) {
      const CounterSnapshot& snap = point.replicates[i];
      reps << param_name << ',' << point.param_value << ',' << i << ','
           << point.seeds[i] << ',' << snap.tick;
      for (const CounterField& field : counter_fields()) {
        reps << ',' << snap.*field.member;
      }
      reps << '\n';
    }
  }

  std::ofstream aggs = open_for_write(path_prefix + ".aggregates.csv");
  aggs << "param_name,param_value,metric,n,min,max,mean,ci_low,ci_high\n";
  for (const SweepPoint& point : result.points) {
    const auto& fields = counter_fields();
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const Aggregate& agg = point.aggregates[f];
      aggs << param_name << ',' << point.param_value << ',' << fields[f].name
           << ',' << agg.n << ',' << format_decimal(agg.min) << ','
           << format_decimal(agg.max) << ',' << format_decimal(agg.mean)
           << ',' << format_decimal(agg.ci_low) << ','
           << format_decimal(agg.ci_high) << '\n';
    }
  }
}

void export_errorbar_svg(const SweepResult& result, const std::string& metric,
                         const std::string& path) {
  const int field = counter_index(metric);
  if (field < 0) {
    throw std::invalid_argument("export_errorbar_svg: unknown metric " +
                                metric);
  }

  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  // Percent axis spans the swept values; value axis spans [0, padded max].
  int x_min = 0, x_max = 100;
  if (!result.points.empty()) {
    x_min = result.points.front().param_value;
    x_max = result.points.back().param_value;
    for (const SweepPoint& p : result.points) {
      x_min = std::min(x_min, p.param_value);
      x_max = std::max(x_max, p.param_value);
    }
  }
  if (x_min == x_max) {
    x_min -= 1;
    x_max += 1;
  }
  double y_max = 0;
  for (const SweepPoint& p : result.points) {
    y_max = std::max(y_max, p.aggregates[field].max);
  }
  if (y_max <= 0) y_max = 1;
  y_max *= 1.05;

  auto x_of = [&](double v) {
    return kLeft + (v - x_min) / (x_max - x_min) * plot_w;
  };
  auto y_of = [&](double v) { return kTop + (1.0 - v / y_max) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << coord(kWidth / 2) << "\" y=\"22\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << metric << " vs " << to_string(result.param) << "</text>\n";

  // Axes.
  svg << "  <line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop)
      << "\" x2=\"" << coord(kLeft) << "\" y2=\"" << coord(kTop + plot_h)
      << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop + plot_h)
      << "\" x2=\"" << coord(kLeft + plot_w) << "\" y2=\""
      << coord(kTop + plot_h) << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    const double y = y_of(v);
    svg << "  <line x1=\"" << coord(kLeft - 4) << "\" y1=\"" << coord(y)
        << "\" x2=\"" << coord(kLeft) << "\" y2=\"" << coord(y)
        << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << format_decimal(v) << "</text>\n";
  }
  for (const SweepPoint& p : result.points) {
    const double x = x_of(p.param_value);
    svg << "  <line x1=\"" << coord(x) << "\" y1=\"" << coord(kTop + plot_h)
        << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(kTop + plot_h + 4)
        << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << coord(x) << "\" y=\""
        << coord(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << p.param_value << "</text>\n";
  }
  svg << "  <text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\""
      << coord(kHeight - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << to_string(result.param) << " (%)</text>\n";
  svg << "  <text x=\"16\" y=\"" << coord(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\" transform=\"rotate(-90 16 "
      << coord(kTop + plot_h / 2) << ")\">" << metric << "</text>\n";

  // Per point: min-max whisker, 95%-CI box, mean marker.
  for (const SweepPoint& p : result.points) {
    const Aggregate& agg = p.aggregates[field];
    const double x = x_of(p.param_value);
    svg << "  <line x1=\"" << coord(x) << "\" y1=\"" << coord(y_of(agg.min))
        << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(y_of(agg.max))
        << "\" stroke=\"#555555\"/>\n";
    for (double v : {agg.min, agg.max}) {
      svg << "  <line x1=\"" << coord(x - 5) << "\" y1=\"" << coord(y_of(v))
          << "\" x2=\"" << coord(x + 5) << "\" y2=\"" << coord(y_of(v))
          << "\" stroke=\"#555555\"/>\n";
    }
    svg << "  <rect x=\"" << coord(x - 7) << "\" y=\""
        << coord(y_of(agg.ci_high)) << "\" width=\"14\" height=\""
        << coord(std::max(0.0, y_of(agg.ci_low) - y_of(agg.ci_high)))
        << "\" fill=\"#4477aa\" fill-opacity=\"0.35\" stroke=\"#4477aa\"/>\n";
    svg << "  <circle cx=\"" << coord(x) << "\" cy=\""
        << coord(y_of(agg.mean))
        << "\" r=\"3\" fill=\"#4477aa\" stroke=\"none\"/>\n";
  }
  svg << "</svg>\n";

  std::ofstream out = open_for_write(path);
  out << svg.str();
}

}  // namespace hivabm
