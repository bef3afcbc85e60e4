// Runs the lifting criteria and the witness search over every layout in a
// small box and reports the NoGuarantee layouts left without a witness.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "liftsl/lifting.hpp"

using namespace liftsl;

namespace {

std::string rows(const std::vector<std::vector<int>>& m) {
  std::string s;
  for (const auto& r : m) {
    for (int x : r) s += std::to_string(x);
    s += '|';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completeness cross-check over all small layouts"};
  int nvars = 2, max_count = 2, max_rows = 2;
  bool verbose = false;
  app.add_option("--vars", nvars, "number of variables")->check(CLI::Range(1, 3));
  app.add_option("--max-count", max_count, "largest occurrence count")->check(CLI::Range(0, 3));
  app.add_option("--max-rows", max_rows, "largest number of conjuncts and of disjuncts")->check(CLI::Range(1, 3));
  app.add_flag("-v,--verbose", verbose, "print every NoGuarantee layout");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> vars;
  for (int v = 0; v < nvars; ++v) vars.push_back(std::string(1, static_cast<char>('a' + v)));
  const int base = max_count + 1;

  std::size_t total = 0, outside = 0, lifts = 0, no_guarantee = 0, witnessed = 0;
  std::vector<std::string> missing;
  const auto t0 = std::chrono::steady_clock::now();
  for (int m = 1; m <= max_rows; ++m) {
    for (int n = 1; n <= max_rows; ++n) {
      const int cells = (m + n) * nvars;
      long combos = 1;
      for (int i = 0; i < cells; ++i) combos *= base;
      for (long code = 0; code < combos; ++code) {
        long c = code;
        std::vector<std::vector<int>> pi(m, std::vector<int>(nvars)), omega(n, std::vector<int>(nvars));
        for (auto& r : pi)
          for (auto& x : r) x = static_cast<int>(c % base), c /= base;
        for (auto& r : omega)
          for (auto& x : r) x = static_cast<int>(c % base), c /= base;
        const LayoutGraph g = layout_from_counts(vars, pi, omega);
        ++total;
        if (!right_only_variables(g).empty()) {
          ++outside;
          continue;
        }
        if (lift_check(g).lifts) {
          ++lifts;
          continue;
        }
        ++no_guarantee;
        const auto r = witness_search(g);
        const bool ok = r.package && recheck(*r.package).ok();
        if (ok) ++witnessed;
        else missing.push_back(rows(pi) + " / " + rows(omega));
        if (verbose) {
          std::cout << (ok ? "witness  " : "MISSING  ") << rows(pi) << " / " << rows(omega);
          if (ok) std::cout << "  " << to_string(r.package->impl);
          std::cout << '\n';
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& s : missing) std::cout << "no witness: " << s << '\n';
  std::cout << total << " layouts (" << nvars << " variables, counts <= " << max_count << ", rows <= " << max_rows
            << "): " << outside << " outside the implication form, " << lifts << " lift, " << no_guarantee
            << " NoGuarantee, " << witnessed << " with a rechecked witness (" << secs << " s)\n";
  return missing.empty() ? 0 : 1;
}
