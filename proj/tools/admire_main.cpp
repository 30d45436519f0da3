// admire: command-line front end for the distributed mining framework.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "admire/error.hpp"
#include "admire/grid.hpp"
#include "admire/orchestrator.hpp"
#include "admire/repositories.hpp"
#include "admire/results_eval.hpp"
#include "admire/serialization.hpp"

namespace fs = std::filesystem;
using namespace admire;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kSystem = 2 };

bool is_system(Errc c) { return c == Errc::io_error || c == Errc::corrupt_repository; }

// Advisory lock on <repo>/.lock, held for the lifetime of the command.
class RepoLock {
 public:
  RepoLock(const fs::path& dir, bool exclusive) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(Errc::io_error, "cannot open " + path.string());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw Error(Errc::io_error, "cannot lock " + path.string());
    }
  }
  ~RepoLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  RepoLock(const RepoLock&) = delete;
  RepoLock& operator=(const RepoLock&) = delete;

 private:
  int fd_ = -1;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& i : items) out += (out.empty() ? "" : ",") + i;
  return out.empty() ? "-" : out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(Errc::io_error, "cannot write " + p.string());
}

fs::path results_dir(const fs::path& repo, const std::string& job) {
  return repo / "results" / encode_file_component(job);
}

std::string report(const KnowledgeEntry& e) {
  return eval::render_model(e.model) + eval::render_metrics(e.metrics);
}

struct Globals {
  std::string repo;
};

fs::path repo_dir(const Globals& g) {
  if (!g.repo.empty()) return g.repo;
  if (const char* env = std::getenv("ADMIRE_REPO"); env && *env) return env;
  throw Error(Errc::invalid_argument, "no repository: pass --repo or set ADMIRE_REPO");
}

int publish_dataset(const Globals& g, const std::string& file, const std::string& id, const std::string& node) {
  const auto dir = repo_dir(g);
  RepoLock lock(dir, true);
  auto repo = Repository::restore(dir);
  DatasetDescriptor d;
  d.id = id;
  d.uri = fs::absolute(file).lexically_normal().string();
  if (!node.empty()) d.owner_node = node;
  repo.publish_dataset(d);
  repo.persist(dir);
  const auto stored = *repo.dataset(id);
  std::cout << "published dataset " << id << " rows=" << stored.row_count << " columns=" << stored.columns.size()
            << "\n";
  return kOk;
}

int publish_algorithm(const Globals& g, const std::string& id, const std::string& kind, const std::string& desc) {
  const auto dir = repo_dir(g);
  AlgorithmDescriptor a{id, parse_task_kind(kind), {}, desc};
  RepoLock lock(dir, true);
  auto repo = Repository::restore(dir);
  repo.publish_algorithm(a);
  repo.persist(dir);
  std::cout << "published algorithm " << id << " kind=" << kind << "\n";
  return kOk;
}

int publish_node(const Globals& g, const std::string& id, const std::string& caps, std::uint32_t capacity,
                 const std::string& hosts) {
  const auto dir = repo_dir(g);
  NodeDescriptor n;
  n.id = id;
  for (auto& c : split_csv(caps)) n.capabilities.insert(c);
  n.capacity = capacity;
  for (auto& h : split_csv(hosts)) n.datasets_hosted.insert(h);
  RepoLock lock(dir, true);
  auto repo = Repository::restore(dir);
  repo.publish_node(n);
  repo.persist(dir);
  std::cout << "published node " << id << " capacity=" << capacity << " capabilities=" << join(n.capabilities)
            << "\n";
  return kOk;
}

int repo_list(const Globals& g, const std::string& kind) {
  const auto dir = repo_dir(g);
  RepoLock lock(dir, false);
  const auto repo = Repository::restore(dir);
  if (kind.empty() || kind == "datasets") {
    std::cout << "datasets\n";
    for (const auto& d : repo.datasets()) {
      std::cout << "  " << d.id << " rows=" << d.row_count << " columns=" << d.columns.size()
                << " owner=" << d.owner_node << " uri=" << d.uri << "\n";
    }
  }
  if (kind.empty() || kind == "algorithms") {
    std::cout << "algorithms\n";
    for (const auto& a : repo.algorithms()) std::cout << "  " << a.id << " kind=" << task_kind_name(a.kind) << "\n";
  }
  if (kind.empty() || kind == "nodes") {
    std::cout << "nodes\n";
    for (const auto& n : repo.nodes()) {
      std::cout << "  " << n.id << " capacity=" << n.capacity << " capabilities=" << join(n.capabilities)
                << " hosts=" << join(n.datasets_hosted) << "\n";
    }
  }
  return kOk;
}

int submit(const Globals& g, const std::string& job_file, const std::string& topology_file,
           std::optional<std::uint64_t> seed, std::optional<std::size_t> partitions) {
  auto job = parse_job_text(read_file(job_file));
  if (seed) job.seed = *seed;

  const auto dir = repo_dir(g);
  RepoLock lock(dir, true);
  auto repo = Repository::restore(dir);

  const auto validation = validate_job(job, repo);
  if (!validation.ok()) {
    for (const auto& v : validation.violations) std::cerr << "error: " << v.describe() << "\n";
    return kInvalid;
  }
  const auto schema = build_schema(job);

  grid::Topology topology;
  if (!topology_file.empty()) {
    topology = grid::load_topology(topology_file);
  } else {
    std::vector<grid::NodeId> ids;
    for (const auto& n : repo.nodes()) ids.push_back(n.id);
    topology = grid::Topology::complete(ids, 1);
  }
  if (topology.nodes().empty()) throw Error(Errc::no_matching_node, "no nodes published");

  repo.supersede_job(job.name);
  repo.store_schema(schema);

  grid::SimGrid grid(std::move(topology));
  orchestration::ExecutionConfig config;
  config.seed = job.seed;
  if (partitions) config.partitions = *partitions;
  const auto origin = orchestration::resolve_origin(grid, config);
  orchestration::populate_grid(grid, repo, origin);
  const auto result = orchestration::execute_job(repo, schema, grid, config);

  const auto out = results_dir(dir, job.name);
  std::error_code ec;
  fs::remove_all(out, ec);
  fs::create_directories(out);
  write_file(out / "result.json", dump_document(orchestration::job_result_json(result)));
  write_file(out / "events.jsonl", orchestration::events_jsonl(result));
  for (const auto& k : result.knowledge) {
    write_file(out / (encode_file_component(k.task) + ".txt"), report(*repo.knowledge(k.job, k.task)));
  }
  repo.persist(dir);

  std::cout << "job " << job.name << " " << (result.ok() ? "completed" : "partial-failure")
            << " makespan=" << result.makespan << "\n";
  for (const auto& id : schema.topological_order) {
    std::cout << "  " << id << " " << orchestration::status_name(result.status.at(id))
              << " node=" << result.allocation.at(id) << "\n";
  }
  for (const auto& e : result.events) {
    if (e.phase == orchestration::Phase::failed) std::cerr << "error: task " << e.task << ": " << e.detail << "\n";
  }
  return result.ok() ? kOk : kInvalid;
}

int results(const Globals& g, const std::string& job, const std::string& task) {
  const auto dir = repo_dir(g);
  RepoLock lock(dir, false);
  const auto repo = Repository::restore(dir);
  repo.load_schema(job);
  if (!task.empty()) {
    const auto e = repo.knowledge(job, task);
    if (!e) throw Error(Errc::unknown_task, "no knowledge for task '" + task + "' of job '" + job + "'");
    std::cout << report(*e);
    return kOk;
  }
  const auto summary = results_dir(dir, job) / "result.json";
  if (fs::exists(summary)) {
    const auto j = nlohmann::json::parse(read_file(summary));
    std::cout << "job " << job << " " << j.at("status").get<std::string>()
              << " makespan=" << j.at("makespan").get<std::uint64_t>() << "\n";
  }
  for (const auto& e : repo.knowledge_for_job(job)) std::cout << "== " << e.task << "\n" << report(e);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"admire: distributed data mining over a simulated grid"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--repo", g.repo, "Repository directory (default: $ADMIRE_REPO)");

  std::function<int()> action;

  auto* pd = app.add_subcommand("publish-dataset", "Register a table file in the dataset repository");
  std::string pd_file, pd_id, pd_node;
  pd->add_option("table-file", pd_file, "Typed CSV table")->required();
  pd->add_option("--id", pd_id, "Dataset id")->required();
  pd->add_option("--node", pd_node, "Owner node (default: local)");
  pd->callback([&] { action = [&] { return publish_dataset(g, pd_file, pd_id, pd_node); }; });

  auto* pa = app.add_subcommand("publish-algorithm", "Register a mining algorithm");
  std::string pa_id, pa_kind, pa_desc;
  pa->add_option("--id", pa_id, "Algorithm id")->required();
  pa->add_option("--kind", pa_kind, "Task kind")->required();
  pa->add_option("--description", pa_desc, "Free text");
  pa->callback([&] { action = [&] { return publish_algorithm(g, pa_id, pa_kind, pa_desc); }; });

  auto* pn = app.add_subcommand("publish-node", "Register a grid node");
  std::string pn_id, pn_caps, pn_hosts;
  std::uint32_t pn_capacity = 1;
  pn->add_option("--id", pn_id, "Node id")->required();
  pn->add_option("--capabilities", pn_caps, "Comma-separated capabilities");
  pn->add_option("--capacity", pn_capacity, "Concurrent task slots")->check(CLI::PositiveNumber);
  pn->add_option("--hosts", pn_hosts, "Comma-separated dataset ids replicated on the node");
  pn->callback([&] { action = [&] { return publish_node(g, pn_id, pn_caps, pn_capacity, pn_hosts); }; });

  auto* repo = app.add_subcommand("repo", "Inspect the repositories");
  repo->require_subcommand(1);
  auto* list = repo->add_subcommand("list", "List published datasets, algorithms and nodes");
  std::string list_kind;
  list->add_option("--kind", list_kind, "Section to list")->check(CLI::IsMember({"datasets", "algorithms", "nodes"}));
  list->callback([&] { action = [&] { return repo_list(g, list_kind); }; });

  auto* sb = app.add_subcommand("submit", "Validate, schedule and run a job file");
  std::string sb_job, sb_topology;
  std::optional<std::uint64_t> sb_seed;
  std::optional<std::size_t> sb_partitions;
  sb->add_option("job-file", sb_job, "JSON job description")->required();
  sb->add_option("--topology", sb_topology, "JSON topology (default: complete graph, latency 1)");
  sb->add_option("--seed", sb_seed, "Overrides the job seed");
  sb->add_option("--partitions", sb_partitions, "Sites each dataset is split into")->check(CLI::PositiveNumber);
  sb->callback([&] { action = [&] { return submit(g, sb_job, sb_topology, sb_seed, sb_partitions); }; });

  auto* rs = app.add_subcommand("results", "Show the knowledge produced by a job");
  std::string rs_job, rs_task;
  rs->add_option("job-name", rs_job, "Job name")->required();
  rs->add_option("--task", rs_task, "Only this task");
  rs->callback([&] { action = [&] { return results(g, rs_job, rs_task); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_system(e.code()) ? kSystem : kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: parse-error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: io-error: " << e.what() << "\n";
    return kSystem;
  }
}
