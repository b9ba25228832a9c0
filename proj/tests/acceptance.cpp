// Runs every acceptance criterion and prints one PASS/FAIL line per check.
// Exit status is 0 only when all checks pass.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "qclone/verify.hpp"

int main(int argc, char** argv) {
  qclone::VerifyOptions options;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0) options.seed = std::strtoull(argv[i + 1], nullptr, 10);
    if (std::strcmp(argv[i], "--threads") == 0) options.threads = static_cast<unsigned>(std::atoi(argv[i + 1]));
  }
  int failed = 0;
  qclone::run_verification(options, [&](const qclone::CheckResult& r) {
    failed += !r.passed;
    std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.criterion << ": " << r.name
              << " | " << r.detail << std::endl;
  });
  std::cout << (failed == 0 ? "all acceptance criteria passed" : "acceptance FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
