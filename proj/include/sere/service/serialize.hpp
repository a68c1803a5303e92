#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "sere/model.hpp"

namespace sere {

/// Fixed-point rendering with round-half-up applied to the shortest decimal
/// form of `value`; "inf" for infinity.
std::string format_fixed(double value, int decimals);

/// XML document for a result. Elements and attributes of fields missing from
/// `result.fields` are omitted. Layout:
///
///   <sere version lang query from_cache>
///     <concept title url thumbnail?><description/></concept>
///     <related count><entity title url sr? distance? category? thumbnail?>
///       <snippet track source>text</snippet>...</entity>...</related>
///     <categories><category name size/>...</categories>
///   </sere>
std::string to_xml(const ExplorationResult& result);

/// Reads a document produced by to_xml. The field selection is inferred from
/// the elements present. Throws std::runtime_error on malformed input.
ExplorationResult from_xml(std::string_view xml);

/// Structural check of a response document; one message per violation.
std::vector<std::string> validate_xml(std::string_view xml, std::size_t max_snippets = 3);

std::string to_json(const ExplorationResult& result);

std::string error_xml(std::string_view code, std::string_view message);
std::string error_json(std::string_view code, std::string_view message);

/// Rank, title, sr, category and a shortened first snippet for the first
/// `top` entities.
std::string to_table(const ExplorationResult& result, std::size_t top);

std::string iso8601(std::chrono::system_clock::time_point t);

}  // namespace sere
