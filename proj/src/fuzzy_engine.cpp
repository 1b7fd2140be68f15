#include <algorithm>
#include <cmath>
#include <map>

#include "lprof/fuzzy.hpp"

namespace lprof {

void FisSpec::validate() const {
    if (inputs.empty()) throw FisError(name + ": no inputs");
    std::size_t combinations = 1;
    for (const auto& in : inputs) {
        if (in.terms.empty()) throw FisError(name + ": input '" + in.name + "' has no terms");
        if (!(in.domain.lo < in.domain.hi)) throw FisError(name + ": input '" + in.name + "' has an empty domain");
        combinations *= in.terms.size();
    }
    if (output.terms.empty()) throw FisError(name + ": output has no terms");
    for (const auto& t : output.terms) {
        if (t.mf.kind() != MembershipFunction::Kind::Gaussian) {
            throw FisError(name + ": output term '" + t.label + "' must be gaussian");
        }
    }

    std::map<std::vector<std::size_t>, std::size_t> seen;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const auto& rule = rules[r];
        if (rule.antecedent.size() != inputs.size()) {
            throw FisError(name + ": rule " + std::to_string(r + 1) + " has the wrong arity");
        }
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (rule.antecedent[i] >= inputs[i].terms.size()) {
                throw FisError(name + ": rule " + std::to_string(r + 1) + " names an unknown input term");
            }
        }
        if (rule.consequent >= output.terms.size()) {
            throw FisError(name + ": rule " + std::to_string(r + 1) + " names an unknown output term");
        }
        if (!seen.emplace(rule.antecedent, r).second) {
            throw FisError(name + ": rule " + std::to_string(r + 1) + " repeats an antecedent combination");
        }
    }
    if (seen.size() != combinations) {
        throw FisError(name + ": rule base covers " + std::to_string(seen.size()) + " of " +
                       std::to_string(combinations) + " antecedent combinations");
    }
}

Degrees fuzzify(const FisSpec& fis, std::span<const double> inputs) {
    if (inputs.size() != fis.inputs.size()) {
        throw FisError(fis.name + ": expected " + std::to_string(fis.inputs.size()) + " inputs, got " +
                       std::to_string(inputs.size()));
    }
    Degrees out(fis.inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& var = fis.inputs[i];
        const double x = var.domain.clamp(inputs[i]);
        out[i].reserve(var.terms.size());
        for (const auto& t : var.terms) out[i].push_back(std::clamp(t.mf(x), 0.0, 1.0));
    }
    return out;
}

std::vector<double> infer_minmax(const FisSpec& fis, const Degrees& degrees) {
    std::vector<double> strengths(fis.output.terms.size(), 0.0);
    for (const auto& rule : fis.rules) {
        double s = 1.0;
        for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
            s = std::min(s, degrees[i][rule.antecedent[i]]);
        }
        strengths[rule.consequent] = std::max(strengths[rule.consequent], s);
    }
    return strengths;
}

MomResult defuzzify_mom(std::span<const double> strengths, std::span<const double> centers,
                        std::span<const double> widths, Interval universe) {
    if (strengths.size() != centers.size() || strengths.size() != widths.size()) {
        throw FisError("defuzzify_mom: strengths, centers and widths differ in length");
    }
    double height = 0.0;
    for (double s : strengths) height = std::max(height, s);
    if (!(height > 0.0)) return {0.0, true};

    struct Span {
        double lo, hi;
    };
    std::vector<Span> plateaus;
    for (std::size_t j = 0; j < strengths.size(); ++j) {
        if (strengths[j] != height) continue;
        const double r = height >= 1.0 ? 0.0 : std::sqrt(-widths[j] * std::log(height));
        const double lo = std::max(centers[j] - r, universe.lo);
        const double hi = std::min(centers[j] + r, universe.hi);
        if (lo <= hi) plateaus.push_back({lo, hi});
    }
    if (plateaus.empty()) return {0.0, true};

    std::sort(plateaus.begin(), plateaus.end(), [](const Span& a, const Span& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Span> merged;
    for (const auto& p : plateaus) {
        if (!merged.empty() && p.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, p.hi);
        } else {
            merged.push_back(p);
        }
    }

    double length = 0.0;
    double moment = 0.0;
    for (const auto& m : merged) {
        length += m.hi - m.lo;
        moment += 0.5 * (m.hi * m.hi - m.lo * m.lo);
    }
    if (length > 0.0) return {moment / length, false};

    // Every maximiser is an isolated point (strength 1): plain mean.
    double sum = 0.0;
    for (const auto& m : merged) sum += m.lo;
    return {sum / static_cast<double>(merged.size()), false};
}

MomResult defuzzify_mom(const FisSpec& fis, std::span<const double> strengths) {
    std::vector<double> centers, widths;
    for (const auto& t : fis.output.terms) {
        centers.push_back(t.mf.center());
        widths.push_back(t.mf.width());
    }
    return defuzzify_mom(strengths, centers, widths, fis.output.domain);
}

FisOutput evaluate_fis(const FisSpec& fis, std::span<const double> inputs) {
    FisOutput out;
    out.strengths = infer_minmax(fis, fuzzify(fis, inputs));
    const auto mom = defuzzify_mom(fis, out.strengths);
    out.index = mom.value;
    out.no_rule_fired = mom.no_rule_fired;
    double total = 0.0;
    for (double s : out.strengths) total += s;
    out.percentages.resize(out.strengths.size(), 0.0);
    if (total > 0.0) {
        for (std::size_t i = 0; i < out.strengths.size(); ++i) out.percentages[i] = out.strengths[i] / total;
    }
    return out;
}

const FisSpec& FuzzySystems::behavioral(Profile p) const {
    switch (p) {
        case Profile::Organizer: return organizer;
        case Profile::Verifier: return verifier;
        case Profile::Seeker: return seeker;
        case Profile::Independent: return independent;
    }
    return organizer;
}

namespace {

constexpr double kOutputWidth = 0.8;
constexpr Interval kOutputUniverse{0.0, 12.0};

LinguisticVariable output_variable(std::string name, const std::vector<std::string>& labels,
                                   const std::vector<double>& centers) {
    LinguisticVariable v{std::move(name), kOutputUniverse, {}};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        v.terms.push_back({labels[i], MembershipFunction::gaussian(centers[i], kOutputWidth)});
    }
    return v;
}

LinguisticVariable two_pole(std::string name, Interval domain, std::string low, std::string high,
                            double slope, double center) {
    return {std::move(name),
            domain,
            {{std::move(low), MembershipFunction::sigmoid(-slope, center)},
             {std::move(high), MembershipFunction::sigmoid(slope, center)}}};
}

LinguisticVariable participation_ratio() {
    return {"IR",
            {0.0, 2.0},
            {{"Low", MembershipFunction::sigmoid(-10.0, 0.5)},
             {"Average", MembershipFunction::gaussian(1.0, 0.2)},
             {"Important", MembershipFunction::sigmoid(10.0, 1.5)}}};
}

// Rule lattice shared by the four behavioural systems:
// (input1 favourable?, input2 favourable?, IR level) -> output rank,
// IR level 2 = Important, 1 = Average, 0 = Low; rank 4 is the best label.
struct LatticeRule {
    bool fav1, fav2;
    int ir;
    int rank;
};
constexpr std::array<LatticeRule, 12> kBehaviouralLattice = {{
    {true, true, 2, 4},
    {true, true, 1, 3},
    {true, false, 2, 3},
    {false, true, 2, 3},
    {true, true, 0, 2},
    {false, true, 1, 2},
    {true, false, 1, 2},
    {true, false, 0, 1},
    {false, true, 0, 1},
    {false, false, 2, 1},
    {false, false, 1, 1},
    {false, false, 0, 0},
}};

/// `favourable1/2` is the term index (0 or 1) that counts as favourable;
/// IR terms are Low, Average, Important; output terms ordered worst to best.
FisSpec behavioural_system(std::string name, LinguisticVariable in1, std::size_t favourable1,
                           LinguisticVariable in2, std::size_t favourable2, LinguisticVariable out) {
    FisSpec fis;
    fis.name = std::move(name);
    fis.inputs = {std::move(in1), std::move(in2), participation_ratio()};
    fis.output = std::move(out);
    for (const auto& lr : kBehaviouralLattice) {
        fis.rules.push_back({{lr.fav1 ? favourable1 : 1 - favourable1, lr.fav2 ? favourable2 : 1 - favourable2,
                              static_cast<std::size_t>(lr.ir)},
                             static_cast<std::size_t>(lr.rank)});
    }
    fis.validate();
    return fis;
}

const std::vector<double> kBehaviouralCenters = {2.0, 4.0, 6.0, 8.0, 10.0};

}  // namespace

FuzzySystems FuzzySystems::standard() {
    const Interval unit{0.0, 1.0};
    FuzzySystems s;

    s.organizer = behavioural_system(
        "organizer", two_pole("Coef_int_o", unit, "Passive", "Active", 14.0, 0.5), 1,
        two_pole("Coef_reac_o", unit, "Negative", "Positive", 14.0, 0.5), 1,
        output_variable("Coef_organization", {"Weak_o", "Insufficient_o", "Medium_o", "Satisfactory_o", "Good_o"},
                        kBehaviouralCenters));

    LinguisticVariable verifier_reac{"Coef_reac_v",
                                     unit,
                                     {{"Little", MembershipFunction::gaussian(0.25, 0.02)},
                                      {"Enough", MembershipFunction::sigmoid(11.0, 0.625)}}};
    s.verifier = behavioural_system(
        "verifier", two_pole("Coef_int_v", unit, "Indifferent", "Interested", 14.0, 0.5), 1,
        std::move(verifier_reac), 1,
        output_variable("Coef_check", {"Weak_v", "Insufficient_v", "Medium_v", "Satisfactory_v", "Good_v"},
                        kBehaviouralCenters));

    s.seeker = behavioural_system(
        "seeker", two_pole("Coef_int_s", unit, "Incurious", "Curious", 14.0, 0.5), 1,
        two_pole("Coef_reac_s", unit, "Rejected", "Accepted", 14.0, 0.5), 1,
        output_variable("Coef_quest", {"Weak_s", "Insufficient_s", "Medium_s", "Satisfactory_s", "Good_s"},
                        kBehaviouralCenters));

    // Present and Heard are the low-pole terms yet the favourable ones.
    s.independent = behavioural_system(
        "independent", two_pole("Coef_int_i", unit, "Present", "Absent", 14.0, 0.5), 0,
        two_pole("Coef_reac_i", unit, "Heard", "Disregarded", 14.0, 0.5), 0,
        output_variable("Coef_independence", {"Isolated", "Less_accepted", "Accepted", "Upper_accepted", "Integrated"},
                        kBehaviouralCenters));

    FisSpec collab;
    collab.name = "collaborator";
    collab.inputs = {two_pole("Ind_ort", {0.0, 2.0}, "Weak", "Good", 7.0, 1.0),
                     two_pole("Ind_dec", {0.0, 2.0}, "Weak", "Good", 7.0, 1.0)};
    collab.output = output_variable("Ind_collab", {"Weak_c", "Average_c", "Good_c"}, {2.0, 6.0, 10.0});
    collab.rules = {{{1, 1}, 2}, {{1, 0}, 1}, {{0, 1}, 1}, {{0, 0}, 0}};
    collab.validate();
    s.collaborator = std::move(collab);
    return s;
}

FuzzyProfileVector evaluate_learner(const FuzzySystems& systems, const ProfileCoefficients& c) {
    FuzzyProfileVector v;
    const std::array<double, 2> relational = {c.ind_ort, c.ind_dec};
    v.details[0] = evaluate_fis(systems.collaborator, relational);
    for (Profile p : kProfiles) {
        const std::array<double, 3> in = {c.intervention(p), c.reaction(p), c.ir};
        v.details[1 + index_of(p)] = evaluate_fis(systems.behavioral(p), in);
    }
    v.collaboration = v.details[0].index;
    v.animation = v.details[1].index;
    v.check = v.details[2].index;
    v.quest = v.details[3].index;
    v.independence = v.details[4].index;
    return v;
}

}  // namespace lprof
