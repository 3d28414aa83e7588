#pragma once

#include <vector>

#include "gridfeat/ingest.hpp"
#include "gridfeat/schema.hpp"

namespace gridfeat {

/// Every descriptor the pipeline can build for a dataset, in a fixed order.
/// Category lists for categorical columns (building type, household id, ...)
/// are collected from `frames`, sorted.
std::vector<FeatureDescriptor> dataset_inventory(DatasetId dataset, const std::vector<HourlyFrame>& frames);

/// Descriptors that are part of the catalogue but have no adapter, such as
/// house_activity_metadata. They never reach a feature matrix.
std::vector<FeatureDescriptor> unavailable_descriptors();

/// Raw-data ablation row: Domain measurements and metadata used as they are,
/// without engineered derivatives.
std::vector<FeatureDescriptor> raw_only(const std::vector<FeatureDescriptor>& all);

}  // namespace gridfeat
