#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lprof/fuzzy.hpp"

namespace lprof {

using nlohmann::ordered_json;

namespace {

ordered_json mf_to_json(const MembershipFunction& mf) {
    switch (mf.kind()) {
        case MembershipFunction::Kind::Sigmoid:
            return {{"type", "sigmoid"}, {"slope", mf.slope()}, {"center", mf.center()}};
        case MembershipFunction::Kind::Gaussian:
            return {{"type", "gaussian"}, {"center", mf.center()}, {"width", mf.width()}};
        case MembershipFunction::Kind::Piecewise: {
            auto pieces = ordered_json::array();
            for (const auto& p : mf.pieces()) {
                pieces.push_back({{"range", {p.range.lo, p.range.hi}}, {"mf", mf_to_json(p.fn)}});
            }
            return {{"type", "piecewise"}, {"pieces", std::move(pieces)}};
        }
    }
    return {};
}

MembershipFunction mf_from_json(const ordered_json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "sigmoid") {
        return MembershipFunction::sigmoid(j.at("slope").get<double>(), j.at("center").get<double>());
    }
    if (type == "gaussian") {
        return MembershipFunction::gaussian(j.at("center").get<double>(), j.at("width").get<double>());
    }
    if (type == "piecewise") {
        std::vector<MembershipPiece> pieces;
        for (const auto& p : j.at("pieces")) {
            const auto range = p.at("range").get<std::vector<double>>();
            if (range.size() != 2) throw FisError("piece range must be [lo, hi]");
            pieces.push_back({{range[0], range[1]}, mf_from_json(p.at("mf"))});
        }
        return MembershipFunction::piecewise(std::move(pieces));
    }
    throw FisError("unknown membership type '" + type + "'");
}

ordered_json variable_to_json(const LinguisticVariable& v) {
    auto terms = ordered_json::array();
    for (const auto& t : v.terms) terms.push_back({{"label", t.label}, {"mf", mf_to_json(t.mf)}});
    return {{"name", v.name}, {"domain", {v.domain.lo, v.domain.hi}}, {"terms", std::move(terms)}};
}

LinguisticVariable variable_from_json(const ordered_json& j) {
    LinguisticVariable v;
    v.name = j.at("name").get<std::string>();
    const auto domain = j.at("domain").get<std::vector<double>>();
    if (domain.size() != 2) throw FisError("domain must be [lo, hi]");
    v.domain = {domain[0], domain[1]};
    for (const auto& t : j.at("terms")) {
        v.terms.push_back({t.at("label").get<std::string>(), mf_from_json(t.at("mf"))});
    }
    return v;
}

ordered_json fis_to_json(const FisSpec& fis) {
    auto inputs = ordered_json::array();
    for (const auto& in : fis.inputs) inputs.push_back(variable_to_json(in));
    auto rules = ordered_json::array();
    for (const auto& r : fis.rules) {
        auto antecedent = ordered_json::array();
        for (std::size_t i = 0; i < r.antecedent.size(); ++i) {
            antecedent.push_back(fis.inputs[i].terms[r.antecedent[i]].label);
        }
        rules.push_back({{"if", std::move(antecedent)}, {"then", fis.output.terms[r.consequent].label}});
    }
    return {{"name", fis.name},
            {"inputs", std::move(inputs)},
            {"output", variable_to_json(fis.output)},
            {"rules", std::move(rules)}};
}

FisSpec fis_from_json(const ordered_json& j) {
    FisSpec fis;
    fis.name = j.at("name").get<std::string>();
    for (const auto& in : j.at("inputs")) fis.inputs.push_back(variable_from_json(in));
    fis.output = variable_from_json(j.at("output"));
    for (const auto& r : j.at("rules")) {
        const auto labels = r.at("if").get<std::vector<std::string>>();
        if (labels.size() != fis.inputs.size()) throw FisError(fis.name + ": rule arity mismatch");
        Rule rule;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            rule.antecedent.push_back(fis.inputs[i].term_index(labels[i]));
        }
        rule.consequent = fis.output.term_index(r.at("then").get<std::string>());
        fis.rules.push_back(std::move(rule));
    }
    fis.validate();
    return fis;
}

constexpr const char* kFormatTag = "lprof-fis/1";

}  // namespace

std::string fuzzy_systems_to_json(const FuzzySystems& s) {
    ordered_json j;
    j["format"] = kFormatTag;
    j["systems"] = {{"collaborator", fis_to_json(s.collaborator)},
                    {"organizer", fis_to_json(s.organizer)},
                    {"verifier", fis_to_json(s.verifier)},
                    {"seeker", fis_to_json(s.seeker)},
                    {"independent", fis_to_json(s.independent)}};
    return j.dump(2) + '\n';
}

FuzzySystems fuzzy_systems_from_json(std::string_view text) {
    try {
        const auto j = ordered_json::parse(text);
        if (j.value("format", std::string()) != kFormatTag) {
            throw FisError(std::string("expected format tag ") + kFormatTag);
        }
        const auto& sys = j.at("systems");
        FuzzySystems s;
        s.collaborator = fis_from_json(sys.at("collaborator"));
        s.organizer = fis_from_json(sys.at("organizer"));
        s.verifier = fis_from_json(sys.at("verifier"));
        s.seeker = fis_from_json(sys.at("seeker"));
        s.independent = fis_from_json(sys.at("independent"));
        if (s.collaborator.inputs.size() != 2) throw FisError("collaborator must take 2 inputs");
        for (const FisSpec* b : {&s.organizer, &s.verifier, &s.seeker, &s.independent}) {
            if (b->inputs.size() != 3) throw FisError(b->name + " must take 3 inputs");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FisError(std::string("bad FIS JSON: ") + e.what());
    }
}

FuzzySystems load_fuzzy_systems(const std::string& name_or_path) {
    if (name_or_path == "default") return FuzzySystems::standard();
    std::ifstream in(name_or_path);
    if (!in) throw FisError("cannot open FIS spec '" + name_or_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return fuzzy_systems_from_json(ss.str());
}

}  // namespace lprof
