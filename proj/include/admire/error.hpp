#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace admire {

// Error identifiers shared by every module. The CLI prints `identifier()`
// on stderr, so the spelling here is part of the external surface.
enum class Errc {
  parse_error,
  type_error,
  invalid_k,
  unknown_column,
  constant_column,
  non_numeric_column,
  invalid_fraction,
  dimension_mismatch,
  non_numeric_data,
  mixed_sizes,
  missing_label,
  empty_model,
  shape_mismatch,
  empty_data,
  bad_k,
  invalid_threshold,
  schema_mismatch,
  no_algorithm,
  data_incompatible,
  duplicate_entry,
  duplicate_id,
  unreadable_table,
  no_matching_node,
  unknown_schema,
  io_error,
  corrupt_repository,
  cycle_detected,
  unknown_task,
  missing_duration,
  duplicate_entity,
  unknown_node,
  unreachable_node,
  task_failure,
  unknown_dataset,
  malformed_frame,
  bad_magic,
  unsupported_version,
  length_mismatch,
  empty_input,
  invalid_job,
  unknown_kind,
  invalid_argument,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view identifier() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace admire
