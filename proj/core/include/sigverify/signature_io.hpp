#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sigverify/signature.hpp"

namespace sigverify {

// SVC-2004 text layout: first line is the point count P, then P lines of
// whitespace-separated columns x y [t [button [azimuth altitude pressure]]].
// Columns after the fourth are ignored.
OnlineSignature parse_svc(std::string_view text);

// Generic CSV: header naming x, y and optionally t and pen (any order),
// then one row per point.
OnlineSignature parse_generic_csv(std::string_view text);

/// Writes the generic CSV form with round-trip precision.
std::string to_generic_csv(const OnlineSignature& sig);

/// Dispatches on extension: ".csv" is generic CSV, anything else SVC.
OnlineSignature read_signature_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sigverify
