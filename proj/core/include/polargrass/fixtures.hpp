#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polargrass/forms.hpp"

namespace polargrass {

/// A coordinate bundle of named totally singular subspaces with the
/// identities to check: Grassmannian-line memberships (target on the pencil
/// spanned by two collinear k-subspaces), rational-point claims, and an
/// opposite-rational-lines claim.
struct Fixture {
    std::string name;
    std::string space;  // space descriptor
    int sub_degree = 1;
    std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> subspaces;
    struct Membership {
        std::string target, a, b;
    };
    std::vector<Membership> memberships;
    std::vector<std::string> rational_point_claims;   // contains >= 1 rational point
    std::vector<std::string> no_rational_point_claims;
    std::vector<std::string> exactly_one_rational_claims;
    std::pair<std::string, std::string> opposite_pair;  // empty when unused
    std::vector<std::pair<std::string, std::string>> nonrational_meet;  // (line, opposite line)
};

/// Named bundles: m-gen[-q], t-gen-4, t-gen-8, t-gen-9, not-gen[-q].
Fixture load_fixture(const std::string& name);

/// Versioned JSON form of a bundle (field descriptor, named subspaces as
/// coefficient rows, identity lists).
std::string fixture_to_json(const Fixture& f);
Fixture fixture_from_json(const std::string& text);

struct FixtureCheck {
    std::string what;
    bool passed = false;
    std::string detail;
};

struct FixtureReport {
    std::string name;
    std::vector<FixtureCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

FixtureReport verify_fixture(const Fixture& f);

}  // namespace polargrass
