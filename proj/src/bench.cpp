#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "session.hpp"
#include "specialize.hpp"

namespace modlog {

const std::vector<std::string>& bench_variants() {
  static const std::vector<std::string> v = {"runtime", "expanded",
                                             "specialized", "univ"};
  return v;
}

namespace {

interp_options variant_options(const std::string& name,
                               const interp_options& base) {
  interp_options o = base;
  o.expand = name == "expanded" || name == "specialized";
  o.call_n_via_univ = name == "univ";
  return o;
}

}  // namespace

std::vector<bench_row> run_bench(
    const std::vector<std::pair<std::string, std::string>>& sources,
    const std::string& goal, const std::vector<std::string>& variants,
    int reps, const interp_options& base) {
  const auto& known = bench_variants();
  for (const std::string& v : variants)
    if (std::find(known.begin(), known.end(), v) == known.end())
      throw std::invalid_argument("unknown bench variant: " + v);

  std::vector<bench_row> rows;
  if (reps <= 0) return rows;

  for (const std::string& v : variants) {
    session s(variant_options(v, base));
    // Goal output is not part of the table; measurements still include it.
    s.set_output([](const std::string&) {});
    s.set_error_output([](const std::string&) {});
    for (const auto& src : sources) s.load_string(src.second, src.first);
    s.commit();
    if (v == "specialized") specialize_all(s.db(), s.pool(), s.options());

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
      auto t0 = std::chrono::steady_clock::now();
      s.solve(goal, [](const solution&) { return true; });
      auto t1 = std::chrono::steady_clock::now();
      times.push_back(
          std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    rows.push_back({v, reps, times[times.size() / 2]});
  }
  return rows;
}

std::string format_bench(const std::vector<bench_row>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "variant" << std::right << std::setw(8)
      << "reps" << std::setw(14) << "median_us" << "\n";
  out << std::fixed << std::setprecision(3);
  for (const bench_row& r : rows)
    out << std::left << std::setw(12) << r.variant << std::right << std::setw(8)
        << r.reps << std::setw(14) << r.median_us << "\n";
  return out.str();
}

}  // namespace modlog
