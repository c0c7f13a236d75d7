#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stacksdict/doctree.hpp"
#include "stacksdict/macro.hpp"

namespace stacksdict {

struct UnitId {
  FileId file = -1;
  int32_t ordinal = -1;

  bool valid() const { return file >= 0 && ordinal >= 0; }
  auto operator<=>(const UnitId&) const = default;
};

std::string to_string(const UnitId& id);
std::optional<UnitId> parse_unit_id(const std::string& text);

enum class StatementKind {
  Definition,
  Lemma,
  Proposition,
  Theorem,
  Remark,
  Example,
  Situation,
  EquationBlock,
  Unknown,  // orphan proofs whose statement could not be inferred
};

const char* statement_kind_name(StatementKind k);
std::optional<StatementKind> statement_kind_from_env(const std::string& env_name);

struct StatementUnit {
  UnitId id;
  StatementKind kind = StatementKind::Unknown;
  std::optional<std::string> label;
  std::optional<std::string> title;
  std::vector<DocNode> body;
  std::optional<std::vector<DocNode>> proof;
  SourceSpan span;        // statement environment
  SourceSpan proof_span;  // valid only when proof is attached

  bool has_proof() const { return proof.has_value(); }
};

struct CorpusConfig {
  std::vector<std::string> chapters;
  std::string preamble;                          // optional
  std::vector<std::string> extra_statement_envs; // treated as Lemma-like statements
  std::string name = "corpus";

  static CorpusConfig load(const std::filesystem::path& path);
  std::string to_json_bytes() const;
};

struct ManifestEntry {
  FileId id = -1;
  std::string path;  // as listed in the config
  std::string hash;  // content hash at ingest time
};

struct CorpusManifest {
  std::string name;
  std::vector<ManifestEntry> files;
  std::string to_json_bytes() const;
};

// A loaded corpus: manifest plus sources and the preamble macro table.
struct Corpus {
  CorpusConfig config;
  CorpusManifest manifest;
  std::vector<std::string> sources;  // indexed by file id
  MacroTable macros;
};

// Loads every chapter in config order and the preamble macros.
// Errors: MissingFile, DuplicatePath, UnreadableConfig.
Corpus ingest(const std::filesystem::path& root, const CorpusConfig& config,
              DiagnosticSink& sink);
Corpus ingest(const std::filesystem::path& config_path, DiagnosticSink& sink);

// Carves a macro-expanded tree into statement units. A proof environment
// attaches to the nearest preceding statement unit in the same file that
// does not yet own one; otherwise it is flagged OrphanProof and emitted
// with kind Unknown.
std::vector<StatementUnit> extract_statements(const DocTree& tree, FileId file,
                                              DiagnosticSink& sink,
                                              const std::vector<std::string>& extra_envs = {});

struct StatsReport {
  int files = 0;
  long total_lines = 0;
  int units = 0;
  int labeled_units = 0;
  int proofs = 0;
  std::map<std::string, int> units_per_kind;

  std::string to_json_bytes() const;
};

StatsReport corpus_stats(const Corpus& corpus, const std::vector<StatementUnit>& units);

}  // namespace stacksdict
