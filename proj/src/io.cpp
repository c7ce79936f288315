#include "mot/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mot::io {

namespace {

double scalar_from_json_d(const json& v) {
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    if (v.is_number()) return v.get<double>();
    throw ParseError("expected number or rational string", 0);
}

Rational scalar_from_json_q(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return Rational(v.get<double>());  // exact binary64 value
    throw ParseError("expected number or rational string", 0);
}

template <class T, class F>
Measure<T> measure_from_json(const json& j, F&& scalar) {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
        throw ParseError("measure JSON must be {\"atoms\":[...]}", 0);
    std::vector<std::pair<T, T>> pairs;
    for (const auto& a : j["atoms"]) {
        if (!a.is_object() || !a.contains("x") || !a.contains("w"))
            throw ParseError("measure atom must have x and w", 0);
        pairs.emplace_back(scalar(a["x"]), scalar(a["w"]));
    }
    return Measure<T>::from_pairs(std::move(pairs));
}

template <class T, class F>
Coupling<T> coupling_from_json(const json& j, F&& scalar) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
        throw ParseError("coupling JSON must be {\"entries\":[...]}", 0);
    std::vector<std::tuple<T, T, T>> entries;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("x") || !e.contains("y") || !e.contains("w"))
            throw ParseError("coupling entry must have x, y and w", 0);
        entries.emplace_back(scalar(e["x"]), scalar(e["y"]), scalar(e["w"]));
    }
    return coupling_from_entries(entries);
}

json scalar_to_json(double v) { return v; }
json scalar_to_json(const Rational& v) { return format_rational(v); }

template <class T>
json measure_to_json_impl(const Measure<T>& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms())
        atoms.push_back({{"x", scalar_to_json(a.x)}, {"w", scalar_to_json(a.w)}});
    return json{{"atoms", atoms}};
}

template <class T>
json coupling_to_json_impl(const Coupling<T>& pi) {
    json entries = json::array();
    for (const auto& [x, y, w] : pi.entries())
        entries.push_back(
            {{"x", scalar_to_json(x)}, {"y", scalar_to_json(y)}, {"w", scalar_to_json(w)}});
    return json{{"entries", entries}};
}

template <class T>
json dual_to_json_impl(const DualCertificate<T>& dual, const Measure<T>& mu,
                       const Measure<T>& nu) {
    json phi = json::array(), psi = json::array(), delta = json::array();
    for (std::size_t i = 0; i < mu.size(); ++i)
        phi.push_back({{"x", scalar_to_json(mu.atom(i).x)}, {"v", scalar_to_json(dual.phi[i])}});
    for (std::size_t j = 0; j < nu.size(); ++j)
        psi.push_back({{"y", scalar_to_json(nu.atom(j).x)}, {"v", scalar_to_json(dual.psi[j])}});
    for (std::size_t i = 0; i < mu.size(); ++i)
        delta.push_back(
            {{"x", scalar_to_json(mu.atom(i).x)}, {"v", scalar_to_json(dual.delta[i])}});
    return json{{"phi", phi},
                {"psi", psi},
                {"delta", delta},
                {"gap", scalar_to_json(dual.gap)},
                {"min_margin", scalar_to_json(dual.min_margin)}};
}

}  // namespace

MeasureD measure_from_json_d(const json& j) {
    return measure_from_json<double>(j, scalar_from_json_d);
}
MeasureQ measure_from_json_q(const json& j) {
    return measure_from_json<Rational>(j, scalar_from_json_q);
}
json measure_to_json(const MeasureD& m) { return measure_to_json_impl(m); }
json measure_to_json(const MeasureQ& m) { return measure_to_json_impl(m); }

CouplingD coupling_from_json_d(const json& j) {
    return coupling_from_json<double>(j, scalar_from_json_d);
}
CouplingQ coupling_from_json_q(const json& j) {
    return coupling_from_json<Rational>(j, scalar_from_json_q);
}
json coupling_to_json(const CouplingD& pi) { return coupling_to_json_impl(pi); }
json coupling_to_json(const CouplingQ& pi) { return coupling_to_json_impl(pi); }

json dual_to_json(const DualCertificate<double>& dual, const MeasureD& mu, const MeasureD& nu) {
    return dual_to_json_impl(dual, mu, nu);
}
json dual_to_json(const DualCertificate<Rational>& dual, const MeasureQ& mu, const MeasureQ& nu) {
    return dual_to_json_impl(dual, mu, nu);
}

void load_separable_tables(CostSpec& spec) {
    const json j = load_json(spec.sep_file);
    if (!j.contains("phi") || !j.contains("psi"))
        throw ParseError("separable file must contain phi and psi arrays", 0);
    spec.phi.clear();
    spec.psi.clear();
    for (const auto& v : j["phi"]) spec.phi.push_back(scalar_from_json_d(v));
    for (const auto& v : j["psi"]) spec.psi.push_back(scalar_from_json_d(v));
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON in ") + path + ": " + e.what(), e.byte);
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

std::string measure_to_csv(const MeasureD& m) {
    std::ostringstream os;
    os.precision(17);
    os << "x,w\n";
    for (const auto& a : m.atoms()) os << a.x << ',' << a.w << '\n';
    return os.str();
}

MeasureD measure_to_double(const MeasureQ& m) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(m.size());
    for (const auto& a : m.atoms()) pairs.emplace_back(to_double(a.x), to_double(a.w));
    return MeasureD::from_pairs(std::move(pairs));
}

MeasureQ measure_to_exact(const MeasureD& m) {
    std::vector<std::pair<Rational, Rational>> pairs;
    pairs.reserve(m.size());
    for (const auto& a : m.atoms()) pairs.emplace_back(Rational(a.x), Rational(a.w));
    return MeasureQ::from_pairs(std::move(pairs));
}

}  // namespace mot::io
