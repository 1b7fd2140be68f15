#include "lprof/coefficients.hpp"

#include <algorithm>

namespace lprof {

namespace {

double bounded_ratio(int pos, int neg) {
    if (neg == 0) return pos > 0 ? 2.0 : 1.0;
    return std::clamp(static_cast<double>(pos) / neg, 0.0, 2.0);
}

}  // namespace

double orientation_index(const ActCounts& c) { return bounded_ratio(c.orientation_pos, c.orientation_neg); }

double decision_index(const ActCounts& c) { return bounded_ratio(c.decision_pos, c.decision_neg); }

double intervention_coefficient(const ActCounts& c, Profile p) {
    if (c.total <= 0) return 0.0;
    return static_cast<double>(c.intervention[index_of(p)]) / c.total;
}

double reaction_coefficient(const ActCounts& c, Profile p) {
    const int interventions = c.intervention[index_of(p)];
    if (interventions <= 0) return 0.0;
    return std::clamp(static_cast<double>(c.reaction[index_of(p)]) / interventions, 0.0, 1.0);
}

double intervention_ratio(const ActCounts& c, double group_avg) {
    if (!(group_avg > 0.0)) throw ZeroGroupActivity();
    return c.total / group_avg;
}

ProfileCoefficients compute_coefficients(const ActCounts& counts, double group_avg) {
    ProfileCoefficients out;
    out.ind_ort = orientation_index(counts);
    out.ind_dec = decision_index(counts);
    for (Profile p : kProfiles) {
        out.coef_int[index_of(p)] = intervention_coefficient(counts, p);
        out.coef_reac[index_of(p)] = reaction_coefficient(counts, p);
    }
    out.ir = intervention_ratio(counts, group_avg);
    return out;
}

double group_average(const SessionLog& log) {
    if (log.roster.empty()) return 0.0;
    return static_cast<double>(log.records.size()) / static_cast<double>(log.roster.size());
}

}  // namespace lprof
