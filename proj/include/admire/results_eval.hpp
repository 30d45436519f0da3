#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "admire/models.hpp"
#include "admire/table.hpp"

namespace admire::eval {

// Throws length-mismatch, empty-input.
double accuracy(std::span<const std::string> predictions, std::span<const std::string> truth);

// Σ squared distance to the nearest centroid, ties to the lower index.
// Throws dimension-mismatch.
double clustering_sse(const ClusteringModel& model, const Table& data);

// truth label -> predicted label -> count. Throws length-mismatch.
using ConfusionMatrix = std::map<std::string, std::map<std::string, std::uint64_t>>;
ConfusionMatrix confusion_matrix(std::span<const std::string> predictions, std::span<const std::string> truth);

// Line-oriented report; floats printed with six decimals.
std::string render_model(const GlobalModel& model);

// "key = value" lines with 17 significant digits, keys sorted.
std::string render_metrics(const std::map<std::string, double>& metrics);

}  // namespace admire::eval
