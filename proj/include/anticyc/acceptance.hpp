#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace anticyc::acceptance {

// Full runs the stated bounds; Quick shrinks sweeps for fast smoke runs.
enum class Profile { Quick, Full };

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;       // includes the time budget when one is stated
    bool within_budget = true;
    double seconds = 0.0;
    double budget = 0.0;     // seconds allowed; 0 = no stated bound
    std::string witness;     // one-line summary of what was checked
    nlohmann::json detail;
    nlohmann::json to_json() const;
};

// One criterion (1..12) or the whole matrix, in order.  Checks never throw
// out of here: a thrown error fails the criterion with its message as the
// witness.
CriterionResult run_criterion(int index, Profile profile, unsigned long seed = 1);
std::vector<CriterionResult> run_all(Profile profile, unsigned long seed = 1);

// Names in matrix order, for coverage manifests.
std::vector<std::string> criterion_names();

}  // namespace anticyc::acceptance
