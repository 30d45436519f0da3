#include <algorithm>

#include "admire/error.hpp"
#include "admire/grid.hpp"
#include "admire/serialization.hpp"

namespace admire::grid {

namespace {

using Json = nlohmann::json;

std::string_view entity_kind_name(EntityKind k) { return k == EntityKind::data ? "data" : "resource"; }

EntityKind parse_entity_kind(const std::string& s) {
  if (s == "data") return EntityKind::data;
  if (s == "resource") return EntityKind::resource;
  throw Error(Errc::parse_error, "entity kind '" + s + "'");
}

Json entity_json(const Entity& e) {
  Json j{{"id", e.id}, {"kind", entity_kind_name(e.kind)}, {"home_node", e.home_node}};
  if (const auto* d = std::get_if<DatasetRef>(&e.payload)) {
    j["payload"] = {{"dataset_id", d->dataset_id}, {"row_count", d->row_count}};
  } else {
    j["payload"] = std::get<NodeDescriptor>(e.payload);
  }
  return j;
}

Entity entity_from_json(const Json& j) {
  Entity e;
  j.at("id").get_to(e.id);
  e.kind = parse_entity_kind(j.at("kind").get<std::string>());
  j.at("home_node").get_to(e.home_node);
  if (e.kind == EntityKind::data) {
    e.payload = DatasetRef{j.at("payload").at("dataset_id").get<std::string>(),
                           j.at("payload").at("row_count").get<std::uint64_t>()};
  } else {
    e.payload = j.at("payload").get<NodeDescriptor>();
  }
  return e;
}

Bytes to_bytes(const Json& j) {
  const auto s = j.dump();
  return Bytes(s.begin(), s.end());
}

Json from_bytes(const Bytes& b) { return Json::parse(b.begin(), b.end()); }

}  // namespace

bool matches(const Entity& e, const DiscoveryQuery& q) {
  if (e.kind != q.kind) return false;
  if (const auto* d = std::get_if<DatasetRef>(&e.payload)) {
    if (q.payload_id && *q.payload_id != d->dataset_id) return false;
    return q.capabilities.empty();
  }
  const auto& n = std::get<NodeDescriptor>(e.payload);
  if (q.payload_id && *q.payload_id != n.id) return false;
  return std::includes(n.capabilities.begin(), n.capabilities.end(), q.capabilities.begin(), q.capabilities.end());
}

SimGrid::SimGrid(Topology topology, GridOptions options) : topology_(std::move(topology)), options_(options) {
  if (options_.bandwidth_rows_per_tick == 0) throw Error(Errc::invalid_argument, "bandwidth must be positive");
  for (const auto& id : topology_.nodes()) nodes_[id].neighbors = topology_.neighbors(id);
}

SimGrid::NodeState& SimGrid::node(const NodeId& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(Errc::unknown_node, id);
  return it->second;
}

const SimGrid::NodeState& SimGrid::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(Errc::unknown_node, id);
  return it->second;
}

void SimGrid::record(std::string event, const NodeId& at, CorrelationId id, std::string detail) {
  log_.push_back({now_, std::move(event), at, id, std::move(detail)});
}

void SimGrid::schedule(Tick delay, std::variant<Delivery, ExecDone> action) {
  events_.push(Event{now_ + delay, next_seq_++, std::move(action)});
}

void SimGrid::send(Message m, Tick delay) {
  if (m.type == MsgType::discover || m.type == MsgType::discover_hit) ++in_flight_[m.correlation_id];
  auto to = m.dst;
  schedule(delay, Delivery{std::move(to), encode_message(m)});
}

bool SimGrid::step() {
  if (events_.empty()) return false;
  Event ev = events_.top();
  events_.pop();
  now_ = ev.tick;
  in_loop_ = true;
  try {
    if (auto* d = std::get_if<Delivery>(&ev.action)) {
      const auto m = decode_message(d->frame);
      handle(d->to, m);
      if (m.type == MsgType::discover || m.type == MsgType::discover_hit) --in_flight_[m.correlation_id];
    } else {
      auto& done = std::get<ExecDone>(ev.action);
      auto& state = node(done.node);
      --state.running;
      record("exec-end", done.node, done.id, done.outcome.failed ? "failed: " + done.outcome.error : "ok");
      Message reply{MsgType::task_result, done.node, done.reply_to, done.id, 0, {}};
      reply.payload.push_back(done.outcome.failed ? 1 : 0);
      const auto& body = done.outcome.failed ? Bytes(done.outcome.error.begin(), done.outcome.error.end())
                                             : done.outcome.result;
      reply.payload.insert(reply.payload.end(), body.begin(), body.end());
      send(std::move(reply), route_latency(done.node, done.reply_to).value_or(0));
      try_start(done.node);
    }
  } catch (...) {
    in_loop_ = false;
    throw;
  }
  in_loop_ = false;
  return true;
}

void SimGrid::handle(const NodeId& at, const Message& m) {
  auto& state = node(at);
  switch (m.type) {
    case MsgType::discover:
      handle_discover(at, m);
      break;
    case MsgType::discover_hit: {
      record("deliver", at, m.correlation_id, "DISCOVER_HIT from " + m.src);
      auto& acc = state.discovery_results[m.correlation_id];
      const auto body = from_bytes(m.payload);
      for (const auto& e : body.at("entities")) acc.push_back(entity_from_json(e));
      break;
    }
    case MsgType::task_submit:
      record("deliver", at, m.correlation_id, "TASK_SUBMIT from " + m.src);
      state.queue.push_back({m.correlation_id, m.src, m.payload});
      try_start(at);
      break;
    case MsgType::task_result: {
      record("deliver", at, m.correlation_id, "TASK_RESULT from " + m.src);
      Reply r;
      r.failed = !m.payload.empty() && m.payload.front() != 0;
      if (!m.payload.empty()) r.payload.assign(m.payload.begin() + 1, m.payload.end());
      r.arrived_at = now_;
      state.inbox[m.correlation_id] = std::move(r);
      break;
    }
    case MsgType::data_transfer: {
      const auto j = from_bytes(m.payload);
      const auto dataset = j.at("dataset").get<std::string>();
      state.hosted[dataset] = j.at("rows").get<std::uint64_t>();
      transfers_done_.insert(m.correlation_id);
      record("deliver", at, m.correlation_id, "DATA_TRANSFER " + dataset + " from " + m.src);
      break;
    }
  }
}

void SimGrid::handle_discover(const NodeId& at, const Message& m) {
  auto& state = node(at);
  ++last_discovery_.messages;
  if (!state.seen.insert(m.correlation_id).second) {
    ++last_discovery_.duplicates;
    record("discover-duplicate", at, m.correlation_id, "from " + m.src);
    return;
  }
  const auto query_json = from_bytes(m.payload);
  DiscoveryQuery q;
  q.kind = parse_entity_kind(query_json.at("kind").get<std::string>());
  q.capabilities = query_json.at("capabilities").get<std::set<std::string>>();
  if (!query_json.at("payload_id").is_null()) q.payload_id = query_json.at("payload_id").get<std::string>();
  const auto origin = query_json.at("origin").get<std::string>();
  const auto elapsed = query_json.at("elapsed").get<Tick>();
  record("discover", at, m.correlation_id, "from " + m.src + " ttl " + std::to_string(m.ttl));

  Json hits = Json::array();
  for (const auto& [_, e] : state.entities) {
    if (matches(e, q)) hits.push_back(entity_json(e));
  }
  if (!hits.empty()) {
    if (at == origin) {
      auto& acc = state.discovery_results[m.correlation_id];
      for (const auto& h : hits) acc.push_back(entity_from_json(h));
    } else {
      // The hit retraces the query path and pays that path's latency.
      send(Message{MsgType::discover_hit, at, origin, m.correlation_id, 0, to_bytes(Json{{"entities", hits}})},
           elapsed);
    }
  }

  if (m.ttl == 0) {
    ++last_discovery_.ttl_drops;
    return;
  }
  ++last_discovery_.forwards;
  for (const auto& [next, latency] : state.neighbors) {
    if (next == m.src) continue;
    auto fwd = query_json;
    fwd["elapsed"] = elapsed + latency;
    // Relays advance one hop per tick so every node first hears the query
    // over a fewest-hop path, which carries the largest remaining ttl. Link
    // latency is charged on the way back through `elapsed`.
    send(Message{MsgType::discover, at, next, m.correlation_id, static_cast<std::uint16_t>(m.ttl - 1), to_bytes(fwd)},
         1);
  }
}

void SimGrid::try_start(const NodeId& at) {
  auto& state = node(at);
  while (state.running < state.capacity && !state.queue.empty()) {
    auto task = std::move(state.queue.front());
    state.queue.pop_front();
    ++state.running;
    record("exec-start", at, task.id);
    ExecOutcome outcome;
    if (!executor_) {
      outcome = {{}, 0, true, "no executor installed"};
    } else {
      try {
        outcome = executor_(at, task.payload);
      } catch (const std::exception& e) {
        outcome = {{}, 0, true, e.what()};
      }
    }
    schedule(outcome.duration, ExecDone{at, task.id, task.reply_to, std::move(outcome)});
  }
}

void SimGrid::register_entity(Entity e) {
  if (in_loop_) throw Error(Errc::invalid_argument, "grid is not reentrant");
  auto& home = node(e.home_node);
  const bool data_payload = std::holds_alternative<DatasetRef>(e.payload);
  if (data_payload != (e.kind == EntityKind::data)) {
    throw Error(Errc::invalid_argument, "entity '" + e.id + "': kind does not match payload");
  }
  if (!entity_ids_.insert(e.id).second) throw Error(Errc::duplicate_entity, e.id);
  if (const auto* d = std::get_if<DatasetRef>(&e.payload)) {
    home.hosted[d->dataset_id] = d->row_count;
  } else {
    const auto& n = std::get<NodeDescriptor>(e.payload);
    if (n.id == e.home_node) home.capacity = std::max<std::uint32_t>(1, n.capacity);
  }
  home.entities.emplace(e.id, std::move(e));
}

std::vector<Entity> SimGrid::discover(const NodeId& origin, const DiscoveryQuery& query, std::uint16_t ttl) {
  if (in_loop_) throw Error(Errc::invalid_argument, "grid is not reentrant");
  node(origin);
  const auto id = next_correlation_++;
  last_discovery_ = DiscoveryStats{};
  last_discovery_.correlation_id = id;

  Json q{{"origin", origin},
         {"kind", entity_kind_name(query.kind)},
         {"capabilities", query.capabilities},
         {"payload_id", query.payload_id ? Json(*query.payload_id) : Json(nullptr)},
         {"elapsed", 0}};
  // The origin handles its own query without a network hop.
  handle_discover(origin, Message{MsgType::discover, origin, origin, id, ttl, to_bytes(q)});
  while (in_flight_[id] > 0 && step()) {
  }
  in_flight_.erase(id);

  auto& state = node(origin);
  auto found = std::move(state.discovery_results[id]);
  state.discovery_results.erase(id);
  std::sort(found.begin(), found.end(), [](const Entity& a, const Entity& b) { return a.id < b.id; });
  found.erase(std::unique(found.begin(), found.end(), [](const Entity& a, const Entity& b) { return a.id == b.id; }),
              found.end());
  return found;
}

void SimGrid::set_capacity(const NodeId& id, std::uint32_t capacity) {
  if (capacity < 1) throw Error(Errc::invalid_argument, "capacity must be >= 1");
  node(id).capacity = capacity;
}

std::uint32_t SimGrid::capacity(const NodeId& id) const { return node(id).capacity; }

std::optional<Tick> SimGrid::route_latency(const NodeId& from, const NodeId& to) const {
  node(from);
  node(to);
  std::map<NodeId, Tick> dist{{from, 0}};
  std::set<std::pair<Tick, NodeId>> frontier{{0, from}};
  while (!frontier.empty()) {
    auto [d, v] = *frontier.begin();
    frontier.erase(frontier.begin());
    if (v == to) return d;
    if (d > dist[v]) continue;
    for (const auto& [w, lat] : node(v).neighbors) {
      auto it = dist.find(w);
      if (it == dist.end() || d + lat < it->second) {
        if (it != dist.end()) frontier.erase({it->second, w});
        dist[w] = d + lat;
        frontier.insert({d + lat, w});
      }
    }
  }
  return std::nullopt;
}

CorrelationId SimGrid::submit_task(const NodeId& src, const NodeId& dst, Bytes payload) {
  if (in_loop_) throw Error(Errc::invalid_argument, "grid is not reentrant");
  const auto latency = route_latency(src, dst);
  if (!latency) throw Error(Errc::unreachable_node, dst + " from " + src);
  const auto id = next_correlation_++;
  record("submit", src, id, "to " + dst);
  send(Message{MsgType::task_submit, src, dst, id, 0, std::move(payload)}, *latency);
  return id;
}

TaskReply SimGrid::await_reply(CorrelationId id) {
  if (in_loop_) throw Error(Errc::invalid_argument, "grid is not reentrant");
  for (;;) {
    for (auto& [_, state] : nodes_) {
      auto it = state.inbox.find(id);
      if (it == state.inbox.end()) continue;
      Reply r = std::move(it->second);
      state.inbox.erase(it);
      return {std::move(r.payload), r.arrived_at, r.failed};
    }
    if (!step()) throw Error(Errc::task_failure, "no reply for correlation id " + std::to_string(id));
  }
}

TaskReply SimGrid::await_result(CorrelationId id) {
  auto reply = await_reply(id);
  if (reply.failed) throw Error(Errc::task_failure, std::string(reply.payload.begin(), reply.payload.end()));
  return reply;
}

void SimGrid::transfer_dataset(const std::string& dataset_id, const NodeId& from, const NodeId& to) {
  if (in_loop_) throw Error(Errc::invalid_argument, "grid is not reentrant");
  auto& source = node(from);
  auto& target = node(to);
  auto it = source.hosted.find(dataset_id);
  if (it == source.hosted.end()) throw Error(Errc::unknown_dataset, dataset_id + " at " + from);
  if (target.hosted.count(dataset_id)) return;
  const auto latency = route_latency(from, to);
  if (!latency) throw Error(Errc::unreachable_node, to + " from " + from);
  const auto rows = it->second;
  const auto id = next_correlation_++;
  record("transfer", from, id, dataset_id + " to " + to);
  send(Message{MsgType::data_transfer, from, to, id, 0, to_bytes(Json{{"dataset", dataset_id}, {"rows", rows}})},
       *latency + rows / options_.bandwidth_rows_per_tick);
  while (!transfers_done_.count(id) && step()) {
  }
  transfers_done_.erase(id);
}

bool SimGrid::hosts(const NodeId& id, const std::string& dataset_id) const {
  return node(id).hosted.count(dataset_id) > 0;
}

std::set<std::string> SimGrid::hosted(const NodeId& id) const {
  std::set<std::string> out;
  for (const auto& [d, _] : node(id).hosted) out.insert(d);
  return out;
}

}  // namespace admire::grid
