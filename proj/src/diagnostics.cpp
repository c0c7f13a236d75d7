#include "stacksdict/diagnostics.hpp"

#include <algorithm>

namespace stacksdict {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Info: return "INFO";
    case Severity::Warning: return "WARN";
    case Severity::Error: return "ERROR";
  }
  return "ERROR";
}

std::string Diagnostic::to_line() const {
  std::string out = severity_name(severity);
  out += '\t';
  out += file.empty() ? "<none>" : file;
  out += ':';
  out += std::to_string(line);
  out += ':';
  out += std::to_string(col);
  out += '\t';
  out += code;
  out += '\t';
  out += message;
  return out;
}

void DiagnosticSink::merge(DiagnosticSink&& other) {
  for (auto& d : other.items_) items_.push_back(std::move(d));
  other.items_.clear();
}

bool DiagnosticSink::has_errors() const {
  return std::any_of(items_.begin(), items_.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void DiagnosticSink::print(std::ostream& os) const {
  for (const auto& d : items_) os << d.to_line() << '\n';
}

}  // namespace stacksdict
