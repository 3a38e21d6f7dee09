// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <map>
#include <string>

namespace dccrn {

/// Flat dotted-key configuration file: one `key=value` per line, '#'
/// starts a comment, blank lines ignored. Duplicate keys are an error.
std::map<std::string, std::string> read_kv_file(const std::string& path);

std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin);

}  // namespace dccrn
