#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "admire/repositories.hpp"

// Virtual data grid. Upper layers see entities, discovery, task submission and
// dataset transfer; the backend here is a deterministic discrete-event P2P
// simulation. Every message crosses the simulated network in its wire form.
namespace admire::grid {

using NodeId = std::string;
using Tick = std::uint64_t;
using Bytes = std::vector<std::uint8_t>;
using CorrelationId = std::uint64_t;

// ---- wire codec -----------------------------------------------------------

enum class MsgType : std::uint8_t {
  discover = 1,
  discover_hit = 2,
  task_submit = 3,
  task_result = 4,
  data_transfer = 5,
};

std::string_view msg_type_name(MsgType t) noexcept;

struct Message {
  MsgType type = MsgType::discover;
  NodeId src;
  NodeId dst;
  CorrelationId correlation_id = 0;
  std::uint16_t ttl = 0;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

inline constexpr std::uint8_t kWireVersion = 0x01;

// "ADMR" | version | type | corr u64 BE | ttl u16 BE | len16 src | len16 dst |
// len32 payload. Throws invalid-argument for oversize fields.
Bytes encode_message(const Message& m);
// Throws bad-magic, unsupported-version, malformed-frame.
Message decode_message(std::span<const std::uint8_t> frame);

// ---- topology -------------------------------------------------------------

struct Link {
  NodeId a;
  NodeId b;
  Tick latency = 1;
};

class Topology {
 public:
  void add_node(const NodeId& id);
  // Throws unknown-node, invalid-argument (self-loop or repeated edge).
  void add_edge(const NodeId& a, const NodeId& b, Tick latency);

  const std::set<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& edges() const noexcept { return edges_; }
  bool contains(const NodeId& id) const { return nodes_.count(id) > 0; }
  // Sorted by neighbor id.
  std::vector<std::pair<NodeId, Tick>> neighbors(const NodeId& id) const;
  std::vector<std::set<NodeId>> components() const;

  static Topology complete(const std::vector<NodeId>& nodes, Tick latency);

 private:
  std::set<NodeId> nodes_;
  std::vector<Link> edges_;
  std::map<NodeId, std::map<NodeId, Tick>> adjacency_;
};

// {"nodes": [...], "edges": [{"a":..., "b":..., "latency": n}]}
Topology topology_from_json(const nlohmann::json& j);
nlohmann::json topology_to_json(const Topology& t);
Topology load_topology(const std::filesystem::path& path);

// ---- entities ---------------------------------------------------------------

enum class EntityKind { data, resource };

struct DatasetRef {
  std::string dataset_id;
  std::uint64_t row_count = 0;

  friend bool operator==(const DatasetRef&, const DatasetRef&) = default;
};

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::data;
  std::variant<DatasetRef, NodeDescriptor> payload;
  NodeId home_node;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct DiscoveryQuery {
  EntityKind kind = EntityKind::resource;
  // Resource entities must offer all of these; data entities match only an
  // empty set.
  std::set<std::string> capabilities;
  // Dataset id or node id carried by the payload.
  std::optional<std::string> payload_id;
};

bool matches(const Entity& e, const DiscoveryQuery& q);

struct DiscoveryStats {
  CorrelationId correlation_id = 0;
  std::size_t forwards = 0;
  std::size_t messages = 0;
  std::size_t duplicates = 0;
  std::size_t ttl_drops = 0;
};

// ---- execution --------------------------------------------------------------

struct ExecOutcome {
  Bytes result;
  Tick duration = 1;
  bool failed = false;
  std::string error;
};

// Runs on the destination node when a submitted task reaches the front of its
// queue.
using Executor = std::function<ExecOutcome(const NodeId& node, const Bytes& payload)>;

struct TaskReply {
  Bytes payload;
  Tick arrived_at = 0;
  bool failed = false;
};

struct LogRecord {
  Tick tick = 0;
  std::string event;
  NodeId node;
  CorrelationId correlation_id = 0;
  std::string detail;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct GridOptions {
  // Rows moved per tick by transfer_dataset.
  std::uint64_t bandwidth_rows_per_tick = 1000;
};

// Single-threaded event loop: all state is owned by the loop and every public
// operation runs it until its own events have drained. Not reentrant; an
// executor must not call back into the grid.
class SimGrid {
 public:
  explicit SimGrid(Topology topology, GridOptions options = {});

  const Topology& topology() const noexcept { return topology_; }
  Tick now() const noexcept { return now_; }
  const std::vector<LogRecord>& log() const noexcept { return log_; }

  // Throws duplicate-entity, unknown-node.
  void register_entity(Entity e);

  // TTL-bounded flood from `origin`; results sorted by entity id. Queries
  // are relayed one hop per tick and each hit returns after the summed
  // latency of the path that found it.
  // Throws unknown-node.
  std::vector<Entity> discover(const NodeId& origin, const DiscoveryQuery& query, std::uint16_t ttl);
  const DiscoveryStats& last_discovery() const noexcept { return last_discovery_; }

  void set_executor(Executor executor) { executor_ = std::move(executor); }
  void set_capacity(const NodeId& node, std::uint32_t capacity);
  std::uint32_t capacity(const NodeId& node) const;

  // Throws unknown-node, unreachable-node.
  CorrelationId submit_task(const NodeId& src, const NodeId& dst, Bytes payload);
  // Runs the loop until the reply for `id` arrives. Throws task-failure.
  TaskReply await_result(CorrelationId id);
  // Same, but a failed task comes back with `failed` set and the error text
  // as payload.
  TaskReply await_reply(CorrelationId id);

  // Replicates a dataset from `from` to `to`. Throws unknown-dataset,
  // unknown-node, unreachable-node.
  void transfer_dataset(const std::string& dataset_id, const NodeId& from, const NodeId& to);
  bool hosts(const NodeId& node, const std::string& dataset_id) const;
  std::set<std::string> hosted(const NodeId& node) const;

  // Shortest-path latency used for point-to-point routing.
  std::optional<Tick> route_latency(const NodeId& from, const NodeId& to) const;

 private:
  struct QueuedTask {
    CorrelationId id;
    NodeId reply_to;
    Bytes payload;
  };

  struct Reply {
    bool failed = false;
    Bytes payload;
    Tick arrived_at = 0;
  };

  // Everything a node knows. Discovery decisions read only this.
  struct NodeState {
    std::vector<std::pair<NodeId, Tick>> neighbors;
    std::map<std::string, Entity> entities;
    std::map<std::string, std::uint64_t> hosted;
    std::set<CorrelationId> seen;
    std::uint32_t capacity = 1;
    std::uint32_t running = 0;
    std::deque<QueuedTask> queue;
    std::map<CorrelationId, std::vector<Entity>> discovery_results;
    std::map<CorrelationId, Reply> inbox;
  };

  struct Delivery {
    NodeId to;
    Bytes frame;
  };
  struct ExecDone {
    NodeId node;
    CorrelationId id;
    NodeId reply_to;
    ExecOutcome outcome;
  };
  struct Event {
    Tick tick;
    std::uint64_t seq;
    std::variant<Delivery, ExecDone> action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
    }
  };

  NodeState& node(const NodeId& id);
  const NodeState& node(const NodeId& id) const;
  void schedule(Tick delay, std::variant<Delivery, ExecDone> action);
  void send(Message m, Tick delay);
  bool step();
  void handle(const NodeId& at, const Message& m);
  void handle_discover(const NodeId& at, const Message& m);
  void try_start(const NodeId& at);
  void record(std::string event, const NodeId& node, CorrelationId id, std::string detail = {});

  Topology topology_;
  GridOptions options_;
  std::map<NodeId, NodeState> nodes_;
  std::set<std::string> entity_ids_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t next_seq_ = 0;
  CorrelationId next_correlation_ = 1;
  Tick now_ = 0;
  Executor executor_;
  std::vector<LogRecord> log_;
  // Simulation bookkeeping (not node knowledge): flood events still in
  // flight per discovery, and which transfers have landed.
  std::map<CorrelationId, std::size_t> in_flight_;
  std::set<CorrelationId> transfers_done_;
  DiscoveryStats last_discovery_;
  bool in_loop_ = false;
};

}  // namespace admire::grid
