#include <cmath>

#include "lprof/fuzzy.hpp"

namespace lprof {

MembershipFunction MembershipFunction::sigmoid(double slope, double center) {
    return MembershipFunction(Kind::Sigmoid, slope, center);
}

MembershipFunction MembershipFunction::gaussian(double center, double width) {
    if (!(width > 0.0)) throw FisError("gaussian width must be positive");
    return MembershipFunction(Kind::Gaussian, width, center);
}

MembershipFunction MembershipFunction::piecewise(std::vector<MembershipPiece> pieces) {
    if (pieces.empty()) throw FisError("piecewise membership needs at least one piece");
    MembershipFunction mf(Kind::Piecewise, 0.0, 0.0);
    mf.pieces_ = std::make_shared<const std::vector<MembershipPiece>>(std::move(pieces));
    return mf;
}

std::span<const MembershipPiece> MembershipFunction::pieces() const {
    if (!pieces_) return {};
    return *pieces_;
}

double MembershipFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::Sigmoid:
            return 1.0 / (1.0 + std::exp(-a_ * (x - b_)));
        case Kind::Gaussian: {
            const double d = x - b_;
            return std::exp(-d * d / a_);
        }
        case Kind::Piecewise:
            for (const auto& piece : *pieces_) {
                if (piece.range.contains(x)) return piece.fn(x);
            }
            return 0.0;
    }
    return 0.0;
}

std::size_t LinguisticVariable::term_index(std::string_view label) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].label == label) return i;
    }
    throw FisError("variable '" + name + "' has no term '" + std::string(label) + "'");
}

}  // namespace lprof
