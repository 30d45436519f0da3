#include "admire/repositories.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "admire/error.hpp"
#include "admire/serialization.hpp"

namespace admire {

namespace fs = std::filesystem;

Repository::Repository(const Repository& other) {
  std::shared_lock lock(other.mu_);
  datasets_ = other.datasets_;
  algorithms_ = other.algorithms_;
  nodes_ = other.nodes_;
  schemas_ = other.schemas_;
  knowledge_ = other.knowledge_;
  next_seq_ = other.next_seq_;
}

Repository& Repository::operator=(const Repository& other) {
  if (this == &other) return *this;
  Repository copy(other);
  std::unique_lock lock(mu_);
  datasets_ = std::move(copy.datasets_);
  algorithms_ = std::move(copy.algorithms_);
  nodes_ = std::move(copy.nodes_);
  schemas_ = std::move(copy.schemas_);
  knowledge_ = std::move(copy.knowledge_);
  next_seq_ = copy.next_seq_;
  return *this;
}

std::uint64_t Repository::take_sequence() { return next_seq_++; }

std::uint64_t Repository::next_sequence() const {
  std::shared_lock lock(mu_);
  return next_seq_;
}

std::string Repository::publish_dataset(DatasetDescriptor d) {
  if (d.id.empty()) throw Error(Errc::invalid_argument, "dataset id is empty");
  {
    std::shared_lock lock(mu_);
    if (datasets_.count(d.id)) throw Error(Errc::duplicate_id, "dataset '" + d.id + "'");
  }
  // Parse outside the lock; the table file is not repository state.
  Table table;
  try {
    table = load_table(d.uri);
  } catch (const Error& e) {
    throw Error(Errc::unreadable_table, d.uri + ": " + e.what());
  }
  if (d.columns.empty()) {
    d.columns = table.schema();
  } else if (d.columns != table.schema()) {
    throw Error(Errc::unreadable_table, d.uri + ": declared columns do not match the file");
  }
  if (d.row_count == 0) {
    d.row_count = table.row_count();
  } else if (d.row_count != table.row_count()) {
    throw Error(Errc::unreadable_table, d.uri + ": declared row_count " + std::to_string(d.row_count) +
                                            ", file has " + std::to_string(table.row_count()));
  }

  std::unique_lock lock(mu_);
  if (datasets_.count(d.id)) throw Error(Errc::duplicate_id, "dataset '" + d.id + "'");
  d.published_at = take_sequence();
  const auto id = d.id;
  datasets_.emplace(id, std::move(d));
  return id;
}

std::string Repository::publish_algorithm(AlgorithmDescriptor a) {
  if (a.id.empty()) throw Error(Errc::invalid_argument, "algorithm id is empty");
  std::unique_lock lock(mu_);
  if (algorithms_.count(a.id)) throw Error(Errc::duplicate_id, "algorithm '" + a.id + "'");
  const auto id = a.id;
  algorithms_.emplace(id, std::move(a));
  return id;
}

std::string Repository::publish_node(NodeDescriptor n) {
  if (n.id.empty()) throw Error(Errc::invalid_argument, "node id is empty");
  if (n.capacity < 1) throw Error(Errc::invalid_argument, "node '" + n.id + "': capacity must be >= 1");
  std::unique_lock lock(mu_);
  if (nodes_.count(n.id)) throw Error(Errc::duplicate_id, "node '" + n.id + "'");
  const auto id = n.id;
  nodes_.emplace(id, std::move(n));
  return id;
}

std::string Repository::publish_resource(const std::variant<AlgorithmDescriptor, NodeDescriptor>& r) {
  if (const auto* a = std::get_if<AlgorithmDescriptor>(&r)) return publish_algorithm(*a);
  return publish_node(std::get<NodeDescriptor>(r));
}

namespace {

template <typename Map>
auto lookup(const Map& m, std::string_view id) -> std::optional<typename Map::mapped_type> {
  auto it = m.find(id);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

template <typename Map>
auto values(const Map& m) {
  std::vector<typename Map::mapped_type> out;
  out.reserve(m.size());
  for (const auto& [_, v] : m) out.push_back(v);
  return out;
}

}  // namespace

std::optional<DatasetDescriptor> Repository::dataset(std::string_view id) const {
  std::shared_lock lock(mu_);
  return lookup(datasets_, id);
}

std::optional<AlgorithmDescriptor> Repository::algorithm(std::string_view id) const {
  std::shared_lock lock(mu_);
  return lookup(algorithms_, id);
}

std::optional<NodeDescriptor> Repository::node(std::string_view id) const {
  std::shared_lock lock(mu_);
  return lookup(nodes_, id);
}

std::vector<DatasetDescriptor> Repository::datasets() const {
  std::shared_lock lock(mu_);
  return values(datasets_);
}

std::vector<AlgorithmDescriptor> Repository::algorithms() const {
  std::shared_lock lock(mu_);
  return values(algorithms_);
}

std::vector<NodeDescriptor> Repository::nodes() const {
  std::shared_lock lock(mu_);
  return values(nodes_);
}

std::vector<AlgorithmDescriptor> Repository::query_by_kind(TaskKind kind) const {
  std::shared_lock lock(mu_);
  std::vector<AlgorithmDescriptor> out;
  for (const auto& [_, a] : algorithms_) {
    if (a.kind == kind) out.push_back(a);
  }
  return out;
}

std::vector<NodeDescriptor> Repository::match_nodes(const std::set<std::string>& required, std::size_t count,
                                                    const std::map<std::string, std::size_t>& load) const {
  if (count < 1) throw Error(Errc::invalid_argument, "count must be >= 1");
  std::vector<NodeDescriptor> candidates;
  {
    std::shared_lock lock(mu_);
    for (const auto& [_, n] : nodes_) {
      if (std::includes(n.capabilities.begin(), n.capabilities.end(), required.begin(), required.end())) {
        candidates.push_back(n);
      }
    }
  }
  if (candidates.empty()) {
    std::string req;
    for (const auto& r : required) req += (req.empty() ? "" : ",") + r;
    throw Error(Errc::no_matching_node, "no node offers {" + req + "}");
  }
  auto load_of = [&](const NodeDescriptor& n) {
    auto it = load.find(n.id);
    return it == load.end() ? std::size_t{0} : it->second;
  };
  std::stable_sort(candidates.begin(), candidates.end(), [&](const NodeDescriptor& a, const NodeDescriptor& b) {
    return std::pair(load_of(a), a.id) < std::pair(load_of(b), b.id);
  });
  if (candidates.size() > count) candidates.resize(count);
  return candidates;
}

std::string Repository::store_schema(const ExecutionSchema& schema) {
  std::unique_lock lock(mu_);
  const auto& id = schema.job.name;
  if (id.empty()) throw Error(Errc::invalid_argument, "schema job has no name");
  auto it = schemas_.find(id);
  if (it != schemas_.end()) {
    if (it->second == schema) return id;
    throw Error(Errc::duplicate_id, "schema '" + id + "' already stored with different content");
  }
  schemas_.emplace(id, schema);
  return id;
}

ExecutionSchema Repository::load_schema(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = schemas_.find(id);
  if (it == schemas_.end()) throw Error(Errc::unknown_schema, std::string(id));
  return it->second;
}

std::vector<std::string> Repository::schema_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : schemas_) out.push_back(id);
  return out;
}

KnowledgeEntry Repository::add_knowledge(KnowledgeEntry e) {
  std::unique_lock lock(mu_);
  auto key = std::pair(e.job, e.task);
  if (knowledge_.count(key)) throw Error(Errc::duplicate_entry, "(" + e.job + ", " + e.task + ")");
  e.created_at = take_sequence();
  knowledge_.emplace(std::move(key), e);
  return e;
}

std::optional<KnowledgeEntry> Repository::knowledge(std::string_view job, std::string_view task) const {
  std::shared_lock lock(mu_);
  auto it = knowledge_.find(std::pair(std::string(job), std::string(task)));
  if (it == knowledge_.end()) return std::nullopt;
  return it->second;
}

std::vector<KnowledgeEntry> Repository::knowledge_for_job(std::string_view job) const {
  std::shared_lock lock(mu_);
  std::vector<KnowledgeEntry> out;
  for (const auto& [key, e] : knowledge_) {
    if (key.first == job) out.push_back(e);
  }
  return out;
}

void Repository::supersede_job(std::string_view job) {
  std::unique_lock lock(mu_);
  std::erase_if(knowledge_, [&](const auto& kv) { return kv.first.first == job; });
  auto it = schemas_.find(job);
  if (it != schemas_.end()) schemas_.erase(it);
}

std::optional<TaskKind> Repository::algorithm_kind(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = algorithms_.find(id);
  if (it == algorithms_.end()) return std::nullopt;
  return it->second.kind;
}

bool Repository::has_dataset(std::string_view id) const {
  std::shared_lock lock(mu_);
  return datasets_.find(id) != datasets_.end();
}

std::string encode_file_component(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                       c == '-';
    if (plain && !(out.empty() && c == '.')) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(Errc::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::io_error, "cannot rename " + tmp.string() + ": " + ec.message());
}

Json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw Error(Errc::corrupt_repository, path.string() + ": " + e.what());
  }
}

template <typename T>
T decode(const Json& j, const fs::path& path) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw Error(Errc::corrupt_repository, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(Errc::corrupt_repository, path.string() + ": " + e.what());
  }
}

void sync_directory(const fs::path& dir, const std::set<std::string>& keep) {
  std::error_code ec;
  if (!fs::exists(dir, ec)) return;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" && !keep.count(entry.path().filename().string())) {
      fs::remove(entry.path(), ec);
    }
  }
}

}  // namespace

void Repository::persist(const fs::path& dir) const {
  std::shared_lock lock(mu_);
  std::error_code ec;
  fs::create_directories(dir / "schemas", ec);
  if (!ec) fs::create_directories(dir / "knowledge", ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());

  write_file(dir / "datasets.json", dump_document(Json(values(datasets_))));
  write_file(dir / "algorithms.json", dump_document(Json(values(algorithms_))));
  write_file(dir / "nodes.json", dump_document(Json(values(nodes_))));

  std::set<std::string> schema_files;
  for (const auto& [id, s] : schemas_) {
    const auto name = encode_file_component(id) + ".json";
    schema_files.insert(name);
    write_file(dir / "schemas" / name, dump_document(Json(s)));
  }
  sync_directory(dir / "schemas", schema_files);

  std::set<std::string> knowledge_files;
  for (const auto& [key, e] : knowledge_) {
    const auto name = encode_file_component(key.first) + "_" + encode_file_component(key.second) + ".json";
    knowledge_files.insert(name);
    write_file(dir / "knowledge" / name, dump_document(Json(e)));
  }
  sync_directory(dir / "knowledge", knowledge_files);
}

Repository Repository::restore(const fs::path& dir) {
  Repository repo;
  std::uint64_t max_seq = 0;
  auto section = [&](const char* file, auto&& add) {
    const auto path = dir / file;
    if (!fs::exists(path)) return;
    const auto j = read_json(path);
    if (!j.is_array()) throw Error(Errc::corrupt_repository, path.string() + ": expected an array");
    for (const auto& item : j) add(item, path);
  };
  section("datasets.json", [&](const Json& j, const fs::path& p) {
    auto d = decode<DatasetDescriptor>(j, p);
    max_seq = std::max(max_seq, d.published_at);
    if (!repo.datasets_.emplace(d.id, d).second) throw Error(Errc::corrupt_repository, "duplicate dataset " + d.id);
  });
  section("algorithms.json", [&](const Json& j, const fs::path& p) {
    auto a = decode<AlgorithmDescriptor>(j, p);
    if (!repo.algorithms_.emplace(a.id, a).second) throw Error(Errc::corrupt_repository, "duplicate algorithm " + a.id);
  });
  section("nodes.json", [&](const Json& j, const fs::path& p) {
    auto n = decode<NodeDescriptor>(j, p);
    if (!repo.nodes_.emplace(n.id, n).second) throw Error(Errc::corrupt_repository, "duplicate node " + n.id);
  });

  auto each_json = [&](const fs::path& sub, auto&& fn) {
    if (!fs::exists(sub)) return;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(sub)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) fn(read_json(f), f);
  };
  each_json(dir / "schemas", [&](const Json& j, const fs::path& p) {
    auto s = decode<ExecutionSchema>(j, p);
    repo.schemas_.emplace(s.job.name, std::move(s));
  });
  each_json(dir / "knowledge", [&](const Json& j, const fs::path& p) {
    auto e = decode<KnowledgeEntry>(j, p);
    max_seq = std::max(max_seq, e.created_at);
    repo.knowledge_.emplace(std::pair(e.job, e.task), std::move(e));
  });
  repo.next_seq_ = max_seq + 1;
  return repo;
}

}  // namespace admire
