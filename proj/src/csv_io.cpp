#include "lprof/csv_io.hpp"

#include <cstdio>
#include <map>

#include "lprof/text.hpp"

namespace lprof {

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string provenance_line(std::string_view config) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(config)));
    return "# lprof " + std::string(kToolVersion) + " config=" + hex + "\n";
}

namespace {

struct Row {
    std::size_t line;
    std::vector<std::string_view> cells;
};

struct Table {
    Row header;
    std::vector<Row> rows;
};

Table read_table(std::string_view text) {
    Table t;
    bool have_header = false;
    std::size_t n = 0;
    for (auto raw : split_lines(text)) {
        ++n;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        Row r{n, split(line, ',')};
        for (auto& c : r.cells) c = trim(c);
        if (!have_header) {
            t.header = std::move(r);
            have_header = true;
        } else {
            if (r.cells.size() != t.header.cells.size()) {
                throw CsvError(n, "expected " + std::to_string(t.header.cells.size()) + " fields, found " +
                                      std::to_string(r.cells.size()));
            }
            t.rows.push_back(std::move(r));
        }
    }
    if (!have_header) throw CsvError(0, "missing header row");
    return t;
}

void expect_header(const Row& h, const std::vector<std::string_view>& names) {
    if (h.cells.size() != names.size()) throw CsvError(h.line, "unexpected header");
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (h.cells[i] != names[i]) {
            throw CsvError(h.line, "expected column '" + std::string(names[i]) + "', found '" +
                                       std::string(h.cells[i]) + "'");
        }
    }
}

double number(const Row& r, std::size_t col) {
    auto v = parse_double(r.cells[col]);
    if (!v) throw CsvError(r.line, "not a number: '" + std::string(r.cells[col]) + "'");
    return *v;
}

int integer(const Row& r, std::size_t col) {
    const double v = number(r, col);
    if (v != static_cast<double>(static_cast<int>(v))) {
        throw CsvError(r.line, "not an integer: '" + std::string(r.cells[col]) + "'");
    }
    return static_cast<int>(v);
}

std::vector<std::string_view> index_header(std::string_view first) {
    std::vector<std::string_view> h{first};
    for (const char* name : kIndexNames) h.emplace_back(name);
    return h;
}

void append_row(std::string& out, std::string_view first, std::span<const double> values) {
    out += first;
    for (double v : values) {
        out += ',';
        out += format_double(v);
    }
    out += '\n';
}

void append_header(std::string& out, const std::vector<std::string_view>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    out += '\n';
}

}  // namespace

std::string write_mtslp_csv(const Mtslp& m, std::string_view header) {
    std::string out(header);
    append_header(out, index_header("session"));
    for (std::size_t i = 0; i < m.rows.size(); ++i) append_row(out, m.sessions[i], m.rows[i]);
    return out;
}

Mtslp read_mtslp_csv(std::string_view text, const LearnerId& learner) {
    const Table t = read_table(text);
    expect_header(t.header, index_header("session"));
    Mtslp m;
    m.learner = learner;
    for (const auto& r : t.rows) {
        Row5 v{};
        for (std::size_t i = 0; i < kIndexCount; ++i) v[i] = number(r, i + 1);
        m.sessions.emplace_back(r.cells[0]);
        m.rows.push_back(v);
    }
    return m;
}

std::string write_similarity_csv(const SimilarityMatrix& s, std::string_view header) {
    std::string out(header);
    out += "learner";
    for (const auto& id : s.learners) out += "," + id;
    out += '\n';
    for (std::size_t i = 0; i < s.learners.size(); ++i) append_row(out, s.learners[i], s.values[i]);
    return out;
}

SimilarityMatrix read_similarity_csv(std::string_view text) {
    const Table t = read_table(text);
    if (t.header.cells.empty() || t.header.cells[0] != "learner") {
        throw CsvError(t.header.line, "expected first column 'learner'");
    }
    SimilarityMatrix s;
    for (std::size_t c = 1; c < t.header.cells.size(); ++c) s.learners.emplace_back(t.header.cells[c]);
    if (t.rows.size() != s.learners.size()) throw CsvError(0, "similarity matrix is not square");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (r.cells[0] != s.learners[i]) {
            throw CsvError(r.line, "row learner '" + std::string(r.cells[0]) + "' does not match column order");
        }
        std::vector<double> row;
        for (std::size_t c = 1; c < r.cells.size(); ++c) row.push_back(number(r, c));
        s.values.push_back(std::move(row));
    }
    return s;
}

std::string write_features_csv(const std::vector<LearnerId>& learners, const std::vector<Point>& points,
                               std::string_view header) {
    std::string out(header);
    append_header(out, index_header("learner"));
    for (std::size_t i = 0; i < learners.size(); ++i) append_row(out, learners[i], points[i]);
    return out;
}

void read_features_csv(std::string_view text, std::vector<LearnerId>& learners, std::vector<Point>& points) {
    const Table t = read_table(text);
    expect_header(t.header, index_header("learner"));
    learners.clear();
    points.clear();
    for (const auto& r : t.rows) {
        learners.emplace_back(r.cells[0]);
        Point p;
        for (std::size_t i = 1; i < r.cells.size(); ++i) p.push_back(number(r, i));
        points.push_back(std::move(p));
    }
}

std::string write_clusters_csv(const ClusterTable& table, std::string_view header) {
    std::string out(header);
    out += "learner";
    const std::size_t c = table.memberships.empty() ? 0 : table.memberships.front().size();
    for (std::size_t j = 0; j < c; ++j) out += ",cluster" + std::to_string(j + 1);
    out += ",cluster\n";
    for (std::size_t i = 0; i < table.learners.size(); ++i) {
        out += table.learners[i];
        if (c) {
            for (double v : table.memberships[i]) out += "," + format_double(v);
        }
        out += "," + std::to_string(table.labels[i] + 1) + "\n";
    }
    return out;
}

ClusterTable read_clusters_csv(std::string_view text) {
    const Table t = read_table(text);
    const auto& h = t.header.cells;
    if (h.size() < 2 || h.front() != "learner" || h.back() != "cluster") {
        throw CsvError(t.header.line, "expected columns learner,...,cluster");
    }
    const std::size_t c = h.size() - 2;
    for (std::size_t j = 0; j < c; ++j) {
        if (h[j + 1] != "cluster" + std::to_string(j + 1)) throw CsvError(t.header.line, "bad membership column");
    }
    ClusterTable table;
    for (const auto& r : t.rows) {
        table.learners.emplace_back(r.cells[0]);
        if (c) {
            std::vector<double> u;
            for (std::size_t j = 0; j < c; ++j) u.push_back(number(r, j + 1));
            table.memberships.push_back(std::move(u));
        }
        const int label = integer(r, c + 1);
        if (label < 1) throw CsvError(r.line, "cluster labels start at 1");
        table.labels.push_back(label - 1);
    }
    return table;
}

namespace {

constexpr std::array<std::string_view, 11> kCoefficientColumns = {
    "ind_ort",          "ind_dec",       "int_organizer",  "int_verifier",   "int_seeker", "int_independent",
    "reac_organizer",   "reac_verifier", "reac_seeker",    "reac_independent", "ir"};

std::array<double, 11> coefficient_values(const ProfileCoefficients& c) {
    return {c.ind_ort,      c.ind_dec,      c.coef_int[0],  c.coef_int[1],  c.coef_int[2], c.coef_int[3],
            c.coef_reac[0], c.coef_reac[1], c.coef_reac[2], c.coef_reac[3], c.ir};
}

const FisSpec& system_for_index(const FuzzySystems& s, std::size_t i) {
    return i == 0 ? s.collaborator : s.behavioral(kProfiles[i - 1]);
}

}  // namespace

std::string write_profiles_csv(const std::vector<ProfileRow>& rows, const FuzzySystems& systems,
                               std::string_view header) {
    std::string out(header);
    out += "session,learner";
    for (auto name : kCoefficientColumns) out += "," + std::string(name);
    for (const char* name : kIndexNames) out += "," + std::string(name);
    for (std::size_t i = 0; i < kIndexNames.size(); ++i) {
        for (const auto& term : system_for_index(systems, i).output.terms) {
            out += "," + std::string(kIndexNames[i]) + "_" + term.label;
        }
    }
    out += '\n';
    for (const auto& r : rows) {
        out += r.session_id + "," + r.learner;
        for (double v : coefficient_values(r.coefficients)) out += "," + format_double(v);
        for (double v : r.vector.indices()) out += "," + format_double(v);
        for (const auto& d : r.vector.details) {
            for (double v : d.percentages) out += "," + format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<ProfileRow> read_profiles_csv(std::string_view text) {
    const Table t = read_table(text);
    const auto& h = t.header.cells;
    std::vector<std::string_view> fixed{"session", "learner"};
    fixed.insert(fixed.end(), kCoefficientColumns.begin(), kCoefficientColumns.end());
    for (const char* name : kIndexNames) fixed.emplace_back(name);
    if (h.size() < fixed.size()) throw CsvError(t.header.line, "too few profile columns");
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (h[i] != fixed[i]) throw CsvError(t.header.line, "expected column '" + std::string(fixed[i]) + "'");
    }
    // Percentage columns map to their index by name prefix.
    std::vector<std::size_t> owner;
    for (std::size_t c = fixed.size(); c < h.size(); ++c) {
        std::size_t found = kIndexNames.size();
        for (std::size_t i = 0; i < kIndexNames.size(); ++i) {
            const std::string prefix = std::string(kIndexNames[i]) + "_";
            if (h[c].substr(0, prefix.size()) == prefix) found = i;
        }
        if (found == kIndexNames.size() || (!owner.empty() && found < owner.back())) {
            throw CsvError(t.header.line, "unexpected column '" + std::string(h[c]) + "'");
        }
        owner.push_back(found);
    }

    std::vector<ProfileRow> rows;
    for (const auto& r : t.rows) {
        ProfileRow p;
        p.session_id = r.cells[0];
        p.learner = r.cells[1];
        auto& c = p.coefficients;
        std::size_t col = 2;
        c.ind_ort = number(r, col++);
        c.ind_dec = number(r, col++);
        for (auto& v : c.coef_int) v = number(r, col++);
        for (auto& v : c.coef_reac) v = number(r, col++);
        c.ir = number(r, col++);
        for (std::size_t i = 0; i < kIndexNames.size(); ++i) p.vector.details[i].index = number(r, col++);
        p.vector.collaboration = p.vector.details[0].index;
        p.vector.animation = p.vector.details[1].index;
        p.vector.check = p.vector.details[2].index;
        p.vector.quest = p.vector.details[3].index;
        p.vector.independence = p.vector.details[4].index;
        for (std::size_t k = 0; k < owner.size(); ++k) p.vector.details[owner[k]].percentages.push_back(number(r, col++));
        rows.push_back(std::move(p));
    }
    return rows;
}

}  // namespace lprof
