#pragma once

// Deterministic report records. Objects are key-sorted; the text format lists
// every scalar leaf as "path = value" in the same order as the JSON form.

#include <string>
#include <vector>

#include <json.hpp>

#include "famclass/fourman.hpp"
#include "famclass/scenario.hpp"
#include "famclass/vnengine.hpp"
#include "famclass/wallcross.hpp"

namespace famclass::report {

using json = nlohmann::json;

inline constexpr const char* kSchema = "famclass/1";

enum class Format { Text, Json };

Format format_from_string(const std::string& s);

json inertia_to_json(const lattice::Inertia& i);
json membership_to_json(const fourman::MembershipReport& m);
json degree_to_json(const wall::DegreeResult& d);
json certificate_to_json(const wall::FaceCertificate& c);
json conclusion_to_json(const wall::LedgerConclusion& c);
json count_to_json(const vn::CountResult& c);
json family_class_to_json(const vn::FamilyClass& f);
json perturbation_to_json(const vn::FinDimPerturbation& p);
json verdict_to_json(const scenario::VerdictReport& v);

/// {"schema": "famclass/1", "records": [...]}; the records key is omitted when empty.
json make_report(const std::vector<json>& records);

/// Serializes a report document. Same input gives byte-identical output.
std::string emit_report(const json& doc, Format format);

/// Flattened (path, scalar) pairs in document order.
std::vector<std::pair<std::string, json>> flatten(const json& doc);

}  // namespace famclass::report
