#include "admire/error.hpp"

namespace admire {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "parse-error";
    case Errc::type_error: return "type-error";
    case Errc::invalid_k: return "invalid-k";
    case Errc::unknown_column: return "unknown-column";
    case Errc::constant_column: return "constant-column";
    case Errc::non_numeric_column: return "non-numeric-column";
    case Errc::invalid_fraction: return "invalid-fraction";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::non_numeric_data: return "non-numeric-data";
    case Errc::mixed_sizes: return "mixed-sizes";
    case Errc::missing_label: return "missing-label";
    case Errc::empty_model: return "empty-model";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::empty_data: return "empty-data";
    case Errc::bad_k: return "bad-k";
    case Errc::invalid_threshold: return "invalid-threshold";
    case Errc::schema_mismatch: return "schema-mismatch";
    case Errc::no_algorithm: return "no-algorithm";
    case Errc::data_incompatible: return "data-incompatible";
    case Errc::duplicate_entry: return "duplicate-entry";
    case Errc::duplicate_id: return "duplicate-id";
    case Errc::unreadable_table: return "unreadable-table";
    case Errc::no_matching_node: return "no-matching-node";
    case Errc::unknown_schema: return "unknown-schema";
    case Errc::io_error: return "io-error";
    case Errc::corrupt_repository: return "corrupt-repository";
    case Errc::cycle_detected: return "cycle-detected";
    case Errc::unknown_task: return "unknown-task";
    case Errc::missing_duration: return "missing-duration";
    case Errc::duplicate_entity: return "duplicate-entity";
    case Errc::unknown_node: return "unknown-node";
    case Errc::unreachable_node: return "unreachable-node";
    case Errc::task_failure: return "task-failure";
    case Errc::unknown_dataset: return "unknown-dataset";
    case Errc::malformed_frame: return "malformed-frame";
    case Errc::bad_magic: return "bad-magic";
    case Errc::unsupported_version: return "unsupported-version";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::empty_input: return "empty-input";
    case Errc::invalid_job: return "invalid-job";
    case Errc::unknown_kind: return "unknown-kind";
    case Errc::invalid_argument: return "invalid-argument";
  }
  return "unknown-error";
}

}  // namespace admire
