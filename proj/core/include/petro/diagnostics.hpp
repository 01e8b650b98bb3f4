#pragma once

#include <string>
#include <vector>

namespace petro {

enum class Severity { info, warning, error };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string file;
  int line = 0;  // 1-based, 0 when unknown
  int col = 0;   // 1-based, 0 when unknown
  std::string text;

  std::string to_string() const;
};

std::string severity_name(Severity s);

}  // namespace petro
