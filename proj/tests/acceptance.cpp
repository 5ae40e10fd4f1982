// Runs the full acceptance suite and prints one PASS/FAIL line per criterion.
// Progress goes to stderr; the JSON summary is written next to the binary.

#include "corona/certify.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  corona::CertifyOptions o;
  o.jobs = corona::resolve_jobs(0);
  o.baseline = CORONA_DEFAULT_BASELINE;
  o.log = &std::cerr;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--quick") o.quick = true;
  const auto report = corona::certify(o);
  std::cout << "acceptance (" << (o.quick ? "quick" : "full") << ")\n";
  corona::print_verdicts(std::cout, report);
  std::ofstream(o.quick ? "acceptance_quick.json" : "acceptance_summary.json")
      << corona::summary_json(report).dump(2) << '\n';
  return report.all_ok() ? 0 : 1;
}
