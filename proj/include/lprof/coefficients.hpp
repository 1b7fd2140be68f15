#pragma once

#include <array>
#include <stdexcept>

#include "lprof/acts.hpp"

namespace lprof {

/// Crisp inputs of the five fuzzy systems for one learner in one session.
/// Every field lands inside its fuzzy universe: indices in [0,2],
/// coefficients in [0,1], intervention ratio non-negative.
struct ProfileCoefficients {
    double ind_ort = 1.0;
    double ind_dec = 1.0;
    std::array<double, 4> coef_int{};
    std::array<double, 4> coef_reac{};
    double ir = 0.0;

    double intervention(Profile p) const { return coef_int[index_of(p)]; }
    double reaction(Profile p) const { return coef_reac[index_of(p)]; }
};

class ZeroGroupActivity : public std::domain_error {
public:
    ZeroGroupActivity() : std::domain_error("group average participation is zero") {}
};

/// pos/neg clamped to [0,2]; 2 when only positive acts, 1 when none at all.
double orientation_index(const ActCounts& counts);
double decision_index(const ActCounts& counts);

/// Profile-p interventions over all acts of the learner; 0 without acts.
double intervention_coefficient(const ActCounts& counts, Profile p);

/// Peer reactions over profile-p interventions, clamped to [0,1]; 0 without interventions.
double reaction_coefficient(const ActCounts& counts, Profile p);

/// Learner acts over the group's mean. Throws ZeroGroupActivity if group_avg <= 0.
double intervention_ratio(const ActCounts& counts, double group_avg);

ProfileCoefficients compute_coefficients(const ActCounts& counts, double group_avg);

/// Mean act count over the learners present (the roster) in the session.
double group_average(const SessionLog& log);

}  // namespace lprof
