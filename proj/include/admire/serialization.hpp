#pragma once

#include <json.hpp>

#include "admire/job_model.hpp"
#include "admire/models.hpp"
#include "admire/repositories.hpp"

// JSON forms of the domain types. Field names follow the type definitions.
namespace admire {

using Json = nlohmann::json;

void to_json(Json& j, const ParamValue& v);
void from_json(const Json& j, ParamValue& v);

void to_json(Json& j, const Column& c);
void from_json(const Json& j, Column& c);

void to_json(Json& j, const TaskSpec& t);
void from_json(const Json& j, TaskSpec& t);
void to_json(Json& j, const JobSpec& job);
void from_json(const Json& j, JobSpec& job);
void to_json(Json& j, const ExecutionSchema& s);
void from_json(const Json& j, ExecutionSchema& s);

void to_json(Json& j, const DatasetDescriptor& d);
void from_json(const Json& j, DatasetDescriptor& d);
void to_json(Json& j, const ParamSpec& p);
void from_json(const Json& j, ParamSpec& p);
void to_json(Json& j, const AlgorithmDescriptor& a);
void from_json(const Json& j, AlgorithmDescriptor& a);
void to_json(Json& j, const NodeDescriptor& n);
void from_json(const Json& j, NodeDescriptor& n);

void to_json(Json& j, const GlobalModel& m);
void from_json(const Json& j, GlobalModel& m);
void to_json(Json& j, const KnowledgeEntry& e);
void from_json(const Json& j, KnowledgeEntry& e);

// Parses a job file document. Unknown task kinds raise unknown-kind; other
// structural problems raise invalid-job.
JobSpec parse_job(const Json& j);
JobSpec parse_job_text(std::string_view text);

// Canonical text form used for files: two-space indent, trailing newline.
std::string dump_document(const Json& j);

}  // namespace admire
