#pragma once

#include <string>

#include <json.hpp>

#include "qdiff/field.hpp"

namespace qdiff {

/// Inline field mini-syntax used on the command line:
///   const:VALUE
///   cos2:OFFSET,AMPLITUDE,PHASE[,PERIOD]
///   spline:V0,V1,V2,V3
/// Throws DomainError with a description on malformed input.
PeriodicField parse_field_inline(const std::string& text);

/// Tagged-record form used in config files, e.g.
///   {"kind":"cos2","offset":0.1,"amplitude":1.0,"phase":0.0}
///   {"kind":"constant","value":1.0}
///   {"kind":"spline","control":[0.2,0.8,0.3,0.2]}
/// Unknown keys are rejected.
PeriodicField parse_field_json(const nlohmann::json& j);

/// Rejects any key of `j` not contained in `allowed`; context names the
/// config section in the error message.
void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const std::string& context);

}  // namespace qdiff
