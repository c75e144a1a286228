#include "rmap/report.hpp"

namespace rmap {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::VacuousPass: return "vacuous-pass";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Error: return "error";
  }
  return "?";
}

Verdict merge_verdicts(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::Inconsistent: return 4;
      case Verdict::Error: return 3;
      case Verdict::Fail: return 2;
      case Verdict::Pass: return 1;
      case Verdict::VacuousPass: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace rmap
