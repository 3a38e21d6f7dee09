// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>

#include "dccrn/model.hpp"

namespace dccrn {

/// Checkpoint container: a text header (format version plus the model
/// config as key=value lines) followed by named raw little-endian 32-bit
/// float tensors in declaration order. Round-trips byte-exactly.
void save_checkpoint(const std::string& path, Model<float>& model);

Model<float> load_checkpoint(const std::string& path);

/// Header-only read, for compatibility checks and error messages.
ModelConfig read_checkpoint_config(const std::string& path);

}  // namespace dccrn
