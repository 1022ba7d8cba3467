#include "nsbox/box_io.hpp"

#include <fstream>

namespace nsbox {

namespace {

Json table_to_json(const Correlation& corr) {
    const Scenario& sc = corr.scenario();
    Json jx = Json::array();
    for (int x = 0; x < sc.nx; ++x) {
        Json jy = Json::array();
        for (int y = 0; y < sc.ny; ++y) {
            Json ja = Json::array();
            for (int a = 0; a < sc.na; ++a) {
                Json jb = Json::array();
                for (int b = 0; b < sc.nb; ++b) {
                    if (corr.mode() == NumericMode::rational)
                        jb.push_back(rat_to_string(corr.rat(x, y, a, b)));
                    else
                        jb.push_back(corr.value(x, y, a, b));
                }
                ja.push_back(std::move(jb));
            }
            jy.push_back(std::move(ja));
        }
        jx.push_back(std::move(jy));
    }
    return jx;
}

} // namespace

Json box_to_json(const Correlation& corr) {
    const Scenario& sc = corr.scenario();
    Json j;
    j["schema"] = 1;
    j["scenario"] = {{"nx", sc.nx}, {"ny", sc.ny}, {"na", sc.na}, {"nb", sc.nb}};
    j["mode"] = corr.mode() == NumericMode::rational ? "rational" : "float";
    j["table"] = table_to_json(corr);
    return j;
}

Correlation box_from_json(const Json& j) {
    try {
        const Json& jsc = j.at("scenario");
        Scenario sc;
        sc.nx = jsc.at("nx").get<int>();
        sc.ny = jsc.at("ny").get<int>();
        sc.na = jsc.at("na").get<int>();
        sc.nb = jsc.at("nb").get<int>();
        if (sc.nx < 1 || sc.ny < 1 || sc.na < 1 || sc.nb < 1)
            fail(Errc::parse_error, "scenario counts must be positive");

        const std::string mode = j.at("mode").get<std::string>();
        const Json& table = j.at("table");
        if (table.size() != static_cast<std::size_t>(sc.nx))
            fail(Errc::parse_error, "table x-extent mismatch");

        auto walk = [&](auto&& emit) {
            for (int x = 0; x < sc.nx; ++x) {
                const Json& jy = table.at(x);
                if (jy.size() != static_cast<std::size_t>(sc.ny))
                    fail(Errc::parse_error, "table y-extent mismatch");
                for (int y = 0; y < sc.ny; ++y) {
                    const Json& ja = jy.at(y);
                    if (ja.size() != static_cast<std::size_t>(sc.na))
                        fail(Errc::parse_error, "table a-extent mismatch");
                    for (int a = 0; a < sc.na; ++a) {
                        const Json& jb = ja.at(a);
                        if (jb.size() != static_cast<std::size_t>(sc.nb))
                            fail(Errc::parse_error, "table b-extent mismatch");
                        for (int b = 0; b < sc.nb; ++b)
                            emit(jb.at(b));
                    }
                }
            }
        };

        if (mode == "rational") {
            std::vector<Rational> t;
            t.reserve(sc.table_size());
            walk([&](const Json& cell) {
                if (cell.is_string())
                    t.push_back(rat_from_string(cell.get<std::string>()));
                else if (cell.is_number_integer())
                    t.push_back(Rational(cell.get<long>()));
                else
                    fail(Errc::parse_error, "rational tables use \"num/den\" strings");
            });
            return Correlation::validate(sc, std::move(t));
        }
        if (mode == "float") {
            std::vector<double> t;
            t.reserve(sc.table_size());
            walk([&](const Json& cell) {
                if (!cell.is_number())
                    fail(Errc::parse_error, "float tables use plain numbers");
                t.push_back(cell.get<double>());
            });
            return Correlation::validate(sc, std::move(t));
        }
        fail(Errc::parse_error, "mode must be \"rational\" or \"float\"");
    } catch (const Json::exception& e) {
        fail(Errc::parse_error, std::string("malformed box document: ") + e.what());
    }
}

Correlation read_box_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::parse_error, "cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        fail(Errc::parse_error, std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return box_from_json(j);
}

void write_box_file(const std::string& path, const Correlation& corr) {
    std::ofstream out(path);
    if (!out)
        fail(Errc::parse_error, "cannot write '" + path + "'");
    out << box_to_json(corr).dump(2) << "\n";
}

Json decomposition_to_json(const Decomposition& d) {
    Json j;
    j["schema"] = 1;
    j["type"] = "decomposition";
    Json terms = Json::array();
    for (std::size_t i = 0; i < d.vertex_indices.size(); ++i)
        terms.push_back(Json{{"vertex", d.vertex_indices[i]},
                             {"weight", rat_to_string(d.weights[i])}});
    j["terms"] = std::move(terms);
    j["residual"] = rat_to_string(d.residual);
    j["nonlocal_weight"] = rat_to_string(d.nonlocal_weight);
    return j;
}

Decomposition decomposition_from_json(const Json& j) {
    try {
        Decomposition d;
        for (const Json& term : j.at("terms")) {
            d.vertex_indices.push_back(term.at("vertex").get<int>());
            d.weights.push_back(rat_from_string(term.at("weight").get<std::string>()));
        }
        d.residual = rat_from_string(j.at("residual").get<std::string>());
        d.nonlocal_weight = rat_from_string(j.at("nonlocal_weight").get<std::string>());
        return d;
    } catch (const Json::exception& e) {
        fail(Errc::parse_error, std::string("malformed decomposition: ") + e.what());
    }
}

Json certificate_to_json(const NonlocalityCertificate& c) {
    Json j;
    j["schema"] = 1;
    j["type"] = "certificate";
    j["functional"] = c.functional.name;
    Json coeff = Json::array();
    for (const Rational& q : c.functional.coeff)
        coeff.push_back(rat_to_string(q));
    j["coefficients"] = std::move(coeff);
    if (c.functional.local_bound)
        j["local_bound"] = rat_to_string(*c.functional.local_bound);
    j["achieved"] = rat_to_string(c.achieved);
    j["margin"] = rat_to_string(c.margin);
    return j;
}

} // namespace nsbox
