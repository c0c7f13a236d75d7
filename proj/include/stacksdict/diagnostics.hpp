#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stacksdict/source.hpp"

namespace stacksdict {

enum class Severity { Info, Warning, Error };

const char* severity_name(Severity s);

// One line-oriented diagnostic record:
//   SEVERITY<TAB>file:line:col<TAB>code<TAB>message
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string file;  // path as given in the manifest
  uint32_t line = 0;
  uint32_t col = 0;
  std::string code;
  std::string message;

  std::string to_line() const;
};

// Collects diagnostics during a run. Not thread-safe; parallel stages
// collect locally and merge in manifest order.
class DiagnosticSink {
 public:
  void add(Diagnostic d) { items_.push_back(std::move(d)); }
  void add(Severity sev, std::string file, uint32_t line, uint32_t col,
           std::string code, std::string message) {
    items_.push_back({sev, std::move(file), line, col, std::move(code), std::move(message)});
  }
  void merge(DiagnosticSink&& other);

  const std::vector<Diagnostic>& items() const { return items_; }
  bool has_errors() const;
  void print(std::ostream& os) const;

 private:
  std::vector<Diagnostic> items_;
};

// Hard failure carrying a structured diagnostic.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(Diagnostic d)
      : std::runtime_error(d.to_line()), diagnostic_(std::move(d)) {}
  PipelineError(std::string code, std::string message)
      : PipelineError(Diagnostic{Severity::Error, "", 0, 0, std::move(code), std::move(message)}) {}

  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

}  // namespace stacksdict
