#include "trimlasso/mio.hpp"

#include "trimlasso/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace trimlasso {

Index MioModel::index_of(const std::string& name) const
{
    const auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) throw InvalidArgument("MIO model has no variable '" + name + "'");
    return static_cast<Index>(it - variables.begin());
}

MioModel build_mio(const ProblemInstance& inst, const TrimmedParams& params, double big_m)
{
    params.validate(inst.p());
    if (!(big_m > 0.0) || !std::isfinite(big_m)) throw InvalidArgument("big M must be positive and finite");
    const Index p = inst.p();
    const double inf = std::numeric_limits<double>::infinity();
    const auto b = [](Index i) { return i; };
    const auto z = [p](Index i) { return p + i; };
    const auto a = [p](Index i) { return 2 * p + i; };
    const auto t = [p](Index i) { return 3 * p + i; };

    MioModel m;
    for (const char* prefix : {"b", "z", "a", "t"}) {
        for (Index i = 0; i < p; ++i) m.variables.push_back(prefix + std::to_string(i + 1));
    }
    m.lower.assign(static_cast<std::size_t>(4 * p), 0.0);
    m.upper.assign(static_cast<std::size_t>(4 * p), inf);
    for (Index i = 0; i < p; ++i) {
        m.lower[static_cast<std::size_t>(b(i))] = -inf;
        m.upper[static_cast<std::size_t>(z(i))] = 1.0;
        m.binaries.push_back(z(i));
    }

    m.constant = 0.5 * inst.y_squared_norm();
    const Matrix& G = inst.gram();
    for (Index i = 0; i < p; ++i) m.linear.push_back({b(i), -inst.xty()(i)});
    for (Index i = 0; i < p; ++i) m.linear.push_back({a(i), params.lambda});
    for (Index i = 0; i < p; ++i) m.linear.push_back({t(i), params.eta});
    for (Index i = 0; i < p; ++i) {
        m.quadratic.push_back({b(i), b(i), 0.5 * G(i, i)});
        for (Index j = i + 1; j < p; ++j) m.quadratic.push_back({b(i), b(j), G(i, j)});
    }

    MioConstraint card{"zsum", {}, Sense::Equal, static_cast<double>(p - params.k)};
    for (Index i = 0; i < p; ++i) card.terms.push_back({z(i), 1.0});
    m.constraints.push_back(std::move(card));
    for (Index i = 0; i < p; ++i) {
        const std::string id = std::to_string(i + 1);
        m.constraints.push_back({"apos" + id, {{a(i), 1.0}, {b(i), -1.0}, {z(i), -big_m}}, Sense::Greater, -big_m});
        m.constraints.push_back({"aneg" + id, {{a(i), 1.0}, {b(i), 1.0}, {z(i), -big_m}}, Sense::Greater, -big_m});
    }
    for (Index i = 0; i < p; ++i) {
        const std::string id = std::to_string(i + 1);
        m.constraints.push_back({"tpos" + id, {{t(i), 1.0}, {b(i), -1.0}}, Sense::Greater, 0.0});
        m.constraints.push_back({"tneg" + id, {{t(i), 1.0}, {b(i), 1.0}}, Sense::Greater, 0.0});
    }
    return m;
}

namespace {

const char* sense_token(Sense s)
{
    switch (s) {
    case Sense::Equal: return "=";
    case Sense::Greater: return ">=";
    case Sense::Less: return "<=";
    }
    return "=";
}

double parse_number(const std::string& tok, std::size_t line)
{
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size()) {
        throw InvalidArgument("MIO line " + std::to_string(line) + ": bad number '" + tok + "'");
    }
    return v;
}

}  // namespace

std::string write_mio(const MioModel& m)
{
    std::ostringstream out;
    const auto& v = m.variables;
    const auto name = [&](Index i) { return v[static_cast<std::size_t>(i)]; };
    out << "# trimlasso-mio v1\n";
    out << "VARIABLES " << v.size() << "\n";
    for (const auto& n : v) out << n << "\n";
    out << "OBJECTIVE\n";
    out << "constant " << format_double(m.constant) << "\n";
    for (const auto& t : m.linear) out << "linear " << name(t.var) << " " << format_double(t.coef) << "\n";
    for (const auto& q : m.quadratic) {
        out << "quadratic " << name(q.var1) << " " << name(q.var2) << " " << format_double(q.coef) << "\n";
    }
    out << "BOUNDS\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << v[i] << " " << format_double(m.lower[i]) << " " << format_double(m.upper[i]) << "\n";
    }
    out << "CONSTRAINTS\n";
    for (const auto& c : m.constraints) {
        out << c.name << ":";
        for (const auto& t : c.terms) out << " " << format_double(t.coef) << " " << name(t.var);
        out << " " << sense_token(c.sense) << " " << format_double(c.rhs) << "\n";
    }
    out << "BINARIES\n";
    for (Index i : m.binaries) out << name(i) << "\n";
    out << "END\n";
    return out.str();
}

MioModel parse_mio(const std::string& text)
{
    enum class Section { None, Variables, Objective, Bounds, Constraints, Binaries, End };
    MioModel m;
    std::unordered_map<std::string, Index> lookup;
    const auto var = [&](const std::string& n, std::size_t line) {
        const auto it = lookup.find(n);
        if (it == lookup.end()) throw InvalidArgument("MIO line " + std::to_string(line) + ": unknown variable '" + n + "'");
        return it->second;
    };

    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    std::size_t declared = 0;
    Section section = Section::None;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.empty() || raw[0] == '#') continue;
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string s; ls >> s;) tok.push_back(s);
        if (tok.empty()) continue;

        if (tok[0] == "VARIABLES") {
            if (tok.size() != 2) throw InvalidArgument("MIO line " + std::to_string(line) + ": VARIABLES needs a count");
            declared = static_cast<std::size_t>(parse_number(tok[1], line));
            section = Section::Variables;
            continue;
        }
        if (tok.size() == 1 && (tok[0] == "OBJECTIVE" || tok[0] == "BOUNDS" || tok[0] == "CONSTRAINTS" ||
                                tok[0] == "BINARIES" || tok[0] == "END")) {
            if (section == Section::Variables && m.variables.size() != declared) {
                throw InvalidArgument("MIO: declared " + std::to_string(declared) + " variables, listed " +
                                      std::to_string(m.variables.size()));
            }
            if (tok[0] == "OBJECTIVE") section = Section::Objective;
            if (tok[0] == "BOUNDS") {
                section = Section::Bounds;
                m.lower.assign(m.variables.size(), 0.0);
                m.upper.assign(m.variables.size(), std::numeric_limits<double>::infinity());
            }
            if (tok[0] == "CONSTRAINTS") section = Section::Constraints;
            if (tok[0] == "BINARIES") section = Section::Binaries;
            if (tok[0] == "END") section = Section::End;
            continue;
        }

        switch (section) {
        case Section::Variables:
            lookup.emplace(tok[0], static_cast<Index>(m.variables.size()));
            m.variables.push_back(tok[0]);
            break;
        case Section::Objective:
            if (tok[0] == "constant" && tok.size() == 2) {
                m.constant = parse_number(tok[1], line);
            } else if (tok[0] == "linear" && tok.size() == 3) {
                m.linear.push_back({var(tok[1], line), parse_number(tok[2], line)});
            } else if (tok[0] == "quadratic" && tok.size() == 4) {
                m.quadratic.push_back({var(tok[1], line), var(tok[2], line), parse_number(tok[3], line)});
            } else {
                throw InvalidArgument("MIO line " + std::to_string(line) + ": bad objective entry");
            }
            break;
        case Section::Bounds: {
            if (tok.size() != 3) throw InvalidArgument("MIO line " + std::to_string(line) + ": bad bound");
            const auto i = static_cast<std::size_t>(var(tok[0], line));
            m.lower[i] = parse_number(tok[1], line);
            m.upper[i] = parse_number(tok[2], line);
            break;
        }
        case Section::Constraints: {
            if (tok.size() < 3 || tok[0].back() != ':' || tok.size() % 2 != 1) {
                throw InvalidArgument("MIO line " + std::to_string(line) + ": bad constraint");
            }
            MioConstraint c;
            c.name = tok[0].substr(0, tok[0].size() - 1);
            const std::size_t sense_at = tok.size() - 2;
            for (std::size_t s = 1; s < sense_at; s += 2) {
                c.terms.push_back({var(tok[s + 1], line), parse_number(tok[s], line)});
            }
            const std::string& st = tok[sense_at];
            if (st == "=") c.sense = Sense::Equal;
            else if (st == ">=") c.sense = Sense::Greater;
            else if (st == "<=") c.sense = Sense::Less;
            else throw InvalidArgument("MIO line " + std::to_string(line) + ": bad sense '" + st + "'");
            c.rhs = parse_number(tok.back(), line);
            m.constraints.push_back(std::move(c));
            break;
        }
        case Section::Binaries:
            for (const auto& n : tok) m.binaries.push_back(var(n, line));
            break;
        case Section::None:
        case Section::End:
            throw InvalidArgument("MIO line " + std::to_string(line) + ": content outside a section");
        }
    }
    if (section != Section::End) throw InvalidArgument("MIO: missing END");
    if (m.lower.size() != m.variables.size()) {
        m.lower.assign(m.variables.size(), 0.0);
        m.upper.assign(m.variables.size(), std::numeric_limits<double>::infinity());
    }
    return m;
}

std::string export_mio(const ProblemInstance& inst, const TrimmedParams& params, double big_m)
{
    return write_mio(build_mio(inst, params, big_m));
}

double mio_objective(const MioModel& m, const Vector& x)
{
    if (x.size() != static_cast<Index>(m.variables.size())) throw InvalidArgument("MIO point has wrong length");
    double f = m.constant;
    for (const auto& t : m.linear) f += t.coef * x(t.var);
    for (const auto& q : m.quadratic) f += q.coef * x(q.var1) * x(q.var2);
    return f;
}

double mio_max_violation(const MioModel& m, const Vector& x)
{
    if (x.size() != static_cast<Index>(m.variables.size())) throw InvalidArgument("MIO point has wrong length");
    double worst = 0.0;
    for (std::size_t i = 0; i < m.variables.size(); ++i) {
        const double v = x(static_cast<Index>(i));
        worst = std::max({worst, m.lower[i] - v, v - m.upper[i]});
    }
    for (const auto& c : m.constraints) {
        double lhs = 0.0;
        for (const auto& t : c.terms) lhs += t.coef * x(t.var);
        switch (c.sense) {
        case Sense::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
        case Sense::Greater: worst = std::max(worst, c.rhs - lhs); break;
        case Sense::Less: worst = std::max(worst, lhs - c.rhs); break;
        }
    }
    for (Index i : m.binaries) worst = std::max(worst, std::abs(x(i) - std::round(x(i))));
    return worst;
}

Vector mio_embed(const TrimmedParams& params, const Vector& beta)
{
    const Index p = beta.size();
    params.validate(p);
    const SortedMagnitudes s = sorted_abs(beta);
    Vector x = Vector::Zero(4 * p);
    x.head(p) = beta;
    for (Index pos = params.k; pos < p; ++pos) {
        const Index i = s.permutation[static_cast<std::size_t>(pos)];
        x(p + i) = 1.0;
        x(2 * p + i) = std::abs(beta(i));
    }
    x.tail(p) = beta.cwiseAbs();
    return x;
}

}  // namespace trimlasso
