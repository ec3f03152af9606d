#pragma once

#include <string>
#include <vector>

namespace capp {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;    // 1-based, 0 when not tied to a source position
  int column = 0;  // 1-based, 0 when not tied to a source position
  std::string message;
};

inline const char* to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace capp
