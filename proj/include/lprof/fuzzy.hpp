#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lprof/acts.hpp"
#include "lprof/coefficients.hpp"

namespace lprof {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool operator==(const Interval&) const = default;
};

struct MembershipPiece;

/// Fuzzy-set membership curve.
///
///   sigmoid   1 / (1 + e^(-slope (x - center)))   rising for slope > 0
///   gaussian  e^(-(x - center)^2 / width)
///   piecewise first piece whose range holds x; 0 outside every range
class MembershipFunction {
public:
    enum class Kind { Sigmoid, Gaussian, Piecewise };

    static MembershipFunction sigmoid(double slope, double center);
    static MembershipFunction gaussian(double center, double width);
    static MembershipFunction piecewise(std::vector<MembershipPiece> pieces);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    double slope() const { return a_; }
    double center() const { return b_; }
    double width() const { return a_; }
    std::span<const MembershipPiece> pieces() const;

private:
    MembershipFunction(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_;
    double a_;  // slope (sigmoid) or width (gaussian)
    double b_;  // center
    std::shared_ptr<const std::vector<MembershipPiece>> pieces_;
};

struct MembershipPiece {
    Interval range;
    MembershipFunction fn;
};

struct Term {
    std::string label;
    MembershipFunction mf;
};

struct LinguisticVariable {
    std::string name;
    Interval domain;
    std::vector<Term> terms;

    std::size_t term_index(std::string_view label) const;
};

struct Rule {
    std::vector<std::size_t> antecedent;  // one term index per input
    std::size_t consequent = 0;            // output term index
};

class FisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A Mamdani system: inputs, a Gaussian-termed output and a total rule base.
struct FisSpec {
    std::string name;
    std::vector<LinguisticVariable> inputs;
    LinguisticVariable output;
    std::vector<Rule> rules;

    /// Throws FisError unless every antecedent combination appears in
    /// exactly one rule and every output term is Gaussian.
    void validate() const;
};

/// degrees[i][t]: membership of input i in its term t.
using Degrees = std::vector<std::vector<double>>;

/// Inputs are clamped into their variable's domain. Throws FisError on arity mismatch.
Degrees fuzzify(const FisSpec& fis, std::span<const double> inputs);

/// Rule strength = Min over antecedents; term strength = Max over rules.
std::vector<double> infer_minmax(const FisSpec& fis, const Degrees& degrees);

struct MomResult {
    double value = 0.0;
    /// No rule fired: value is 0 and carries no information.
    bool no_rule_fired = false;
};

/// Mean of maxima of the aggregate max_j min(s_j, G_j(x)) over `universe`,
/// where G_j is the Gaussian e^(-(x-c_j)^2/w_j). Computed from the plateau
/// intervals [c - r, c + r], r = sqrt(-w ln s), of the terms at the top
/// strength, merged and clipped to the universe.
MomResult defuzzify_mom(std::span<const double> strengths, std::span<const double> centers,
                        std::span<const double> widths, Interval universe);

MomResult defuzzify_mom(const FisSpec& fis, std::span<const double> strengths);

struct FisOutput {
    double index = 0.0;
    std::vector<double> strengths;
    /// Strengths normalised to sum 1 (all zero when nothing fired).
    std::vector<double> percentages;
    bool no_rule_fired = false;
};

FisOutput evaluate_fis(const FisSpec& fis, std::span<const double> inputs);

/// The five systems evaluated per learner and session.
struct FuzzySystems {
    FisSpec organizer;
    FisSpec verifier;
    FisSpec seeker;
    FisSpec independent;
    FisSpec collaborator;

    const FisSpec& behavioral(Profile p) const;

    /// Sigmoid/Gaussian inputs, Gaussian outputs (width 0.8) on [0,12],
    /// organizer rule lattice reused for the other behavioural profiles.
    static FuzzySystems standard();
};

inline constexpr std::array<const char*, 5> kIndexNames = {"collaboration", "animation", "check", "quest",
                                                           "independence"};

struct FuzzyProfileVector {
    double collaboration = 0.0;
    double animation = 0.0;
    double check = 0.0;
    double quest = 0.0;
    double independence = 0.0;
    /// Per-system detail in kIndexNames order.
    std::array<FisOutput, 5> details;

    std::array<double, 5> indices() const { return {collaboration, animation, check, quest, independence}; }
};

FuzzyProfileVector evaluate_learner(const FuzzySystems& systems, const ProfileCoefficients& coeffs);

std::string fuzzy_systems_to_json(const FuzzySystems& systems);
/// Throws FisError on schema errors or invalid rule bases.
FuzzySystems fuzzy_systems_from_json(std::string_view json_text);
/// "default" or a path to a JSON file written by fuzzy_systems_to_json.
FuzzySystems load_fuzzy_systems(const std::string& name_or_path);

}  // namespace lprof
