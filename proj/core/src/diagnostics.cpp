#include "petro/diagnostics.hpp"

#include <sstream>

namespace petro {

std::string severity_name(Severity s) {
  switch (s) {
    case Severity::info:
      return "info";
    case Severity::warning:
      return "warning";
    case Severity::error:
      return "error";
  }
  return "error";
}

std::string Diagnostic::to_string() const {
  std::ostringstream os;
  os << severity_name(severity) << ": ";
  if (!file.empty()) {
    os << file << ":";
    if (line > 0) os << line << ":";
    if (col > 0) os << col << ":";
    os << " ";
  } else if (line > 0) {
    os << "line " << line;
    if (col > 0) os << ", col " << col;
    os << ": ";
  }
  os << text;
  return os.str();
}

}  // namespace petro
