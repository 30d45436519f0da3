#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "admire/job_model.hpp"
#include "admire/models.hpp"
#include "admire/table.hpp"

namespace admire {

inline constexpr std::string_view kLocalNode = "local";

struct DatasetDescriptor {
  std::string id;
  std::string uri;
  std::uint64_t row_count = 0;
  Schema columns;
  std::string owner_node{kLocalNode};
  std::uint64_t published_at = 0;

  friend bool operator==(const DatasetDescriptor&, const DatasetDescriptor&) = default;
};

struct ParamSpec {
  std::string name;
  std::string type;  // "int" | "number" | "string" | "bool"
  std::optional<ParamValue> default_value;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct AlgorithmDescriptor {
  std::string id;
  TaskKind kind = TaskKind::clustering;
  std::vector<ParamSpec> param_schema;
  std::string description;

  friend bool operator==(const AlgorithmDescriptor&, const AlgorithmDescriptor&) = default;
};

struct NodeDescriptor {
  std::string id;
  std::set<std::string> capabilities;
  std::uint32_t capacity = 1;
  std::set<std::string> datasets_hosted;

  friend bool operator==(const NodeDescriptor&, const NodeDescriptor&) = default;
};

struct KnowledgeEntry {
  std::string job;
  std::string task;
  GlobalModel model;
  std::map<std::string, double> metrics;
  std::uint64_t created_at = 0;

  friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

// Dataset, resource (algorithms + nodes), task (execution schemas) and
// knowledge repositories behind one reader-writer lock. Queries return
// copies, so callers hold immutable snapshots.
class Repository final : public RepositoryView {
 public:
  Repository() = default;
  Repository(const Repository& other);
  Repository& operator=(const Repository& other);

  // Loads the table at d.uri to check it. Empty `columns` and a zero
  // `row_count` are filled from the file; declared values must match it.
  // Throws duplicate-id, unreadable-table.
  std::string publish_dataset(DatasetDescriptor d);
  std::string publish_algorithm(AlgorithmDescriptor a);
  std::string publish_node(NodeDescriptor n);
  std::string publish_resource(const std::variant<AlgorithmDescriptor, NodeDescriptor>& r);

  std::optional<DatasetDescriptor> dataset(std::string_view id) const;
  std::optional<AlgorithmDescriptor> algorithm(std::string_view id) const;
  std::optional<NodeDescriptor> node(std::string_view id) const;

  std::vector<DatasetDescriptor> datasets() const;
  std::vector<AlgorithmDescriptor> algorithms() const;
  std::vector<NodeDescriptor> nodes() const;

  // Sorted by id.
  std::vector<AlgorithmDescriptor> query_by_kind(TaskKind kind) const;

  // Up to `count` nodes with capabilities ⊇ required, ordered by (load, id).
  // Nodes absent from `load` count as idle. Throws no-matching-node.
  std::vector<NodeDescriptor> match_nodes(const std::set<std::string>& required, std::size_t count,
                                          const std::map<std::string, std::size_t>& load = {}) const;

  // Keyed by job name. Re-storing an identical schema is a no-op.
  std::string store_schema(const ExecutionSchema& schema);
  // Throws unknown-schema.
  ExecutionSchema load_schema(std::string_view id) const;
  std::vector<std::string> schema_ids() const;

  // Assigns created_at. Throws duplicate-entry.
  KnowledgeEntry add_knowledge(KnowledgeEntry e);
  std::optional<KnowledgeEntry> knowledge(std::string_view job, std::string_view task) const;
  std::vector<KnowledgeEntry> knowledge_for_job(std::string_view job) const;
  // Drops a previous run's entries and schema so a job can be resubmitted.
  void supersede_job(std::string_view job);

  std::uint64_t next_sequence() const;

  // One file per section under `dir`. Throws io-error.
  void persist(const std::filesystem::path& dir) const;
  // Missing files are empty sections. Throws corrupt-repository, io-error.
  static Repository restore(const std::filesystem::path& dir);

  std::optional<TaskKind> algorithm_kind(std::string_view id) const override;
  bool has_dataset(std::string_view id) const override;

 private:
  std::uint64_t take_sequence();

  mutable std::shared_mutex mu_;
  std::map<std::string, DatasetDescriptor, std::less<>> datasets_;
  std::map<std::string, AlgorithmDescriptor, std::less<>> algorithms_;
  std::map<std::string, NodeDescriptor, std::less<>> nodes_;
  std::map<std::string, ExecutionSchema, std::less<>> schemas_;
  std::map<std::pair<std::string, std::string>, KnowledgeEntry> knowledge_;
  std::uint64_t next_seq_ = 1;
};

// File-name-safe encoding used for schema and knowledge files: bytes outside
// [A-Za-z0-9.-] become %XX, so `<job>_<task>` stays unambiguous.
std::string encode_file_component(std::string_view s);

}  // namespace admire
