#include "freeprob/json_io.hpp"

namespace freeprob {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& field) {
    return path.empty() ? field : path + "." + field;
}

std::string index(const std::string& path, size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, const std::string& field, const std::string& path) {
    if (!j.contains(field)) throw ParseError(child(path, field), "missing field");
    return j.at(field);
}

}  // namespace

json rational_to_json(const Rational& q) { return rational_str(q); }

Rational rational_from_json(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path, "expected a \"num/den\" string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, e.what());
    }
}

json surd_to_json(const Surd& s) {
    if (s.is_rational()) return rational_to_json(s.as_rational());
    return json{{"a", rational_str(s.rational_part())},
                {"b", rational_str(s.radical_coeff())},
                {"d", s.radicand()}};
}

Surd surd_from_json(const json& j, const std::string& path) {
    if (j.is_string()) return Surd(rational_from_json(j, path));
    if (j.is_object()) {
        Rational a = rational_from_json(require(j, "a", path), child(path, "a"));
        Rational b = rational_from_json(require(j, "b", path), child(path, "b"));
        const json& dj = require(j, "d", path);
        if (!dj.is_number_unsigned() && !dj.is_number_integer())
            throw ParseError(child(path, "d"), "expected a positive integer radicand");
        long d = dj.get<long>();
        if (d < 1) throw ParseError(child(path, "d"), "radicand must be >= 1");
        return Surd(a, b, static_cast<unsigned long>(d));
    }
    throw ParseError(path, "expected \"num/den\" or {a,b,d}");
}

json ext_surd_to_json(const ExtSurd& s) {
    if (s.is_infinite()) return "inf";
    return surd_to_json(s.finite());
}

ExtSurd ext_surd_from_json(const json& j, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "inf") return ExtSurd::infinity();
    return ExtSurd(surd_from_json(j, path));
}

namespace {

json block_to_json(const Block& b) {
    json out;
    switch (b.kind) {
        case BlockKind::Matrix:
            out["kind"] = "matrix";
            out["n"] = b.size;
            break;
        case BlockKind::FreeGroup:
            out["kind"] = "lf";
            out["t"] = ext_surd_to_json(b.param);
            break;
        case BlockKind::Hyperfinite:
            out["kind"] = "r";
            break;
        case BlockKind::Opaque:
            out["kind"] = "opaque";
            out["name"] = b.name;
            if (b.fg.all_positive_rationals) {
                out["fg_generators"] = "all";
            } else {
                json gens = json::array();
                for (const auto& g : b.fg.generators) gens.push_back(rational_to_json(g));
                out["fg_generators"] = gens;
            }
            if (b.compression != Surd(1)) out["compression"] = surd_to_json(b.compression);
            break;
    }
    out["weight"] = surd_to_json(b.weight);
    return out;
}

Block block_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected a summand object");
    std::string kind = require(j, "kind", path).get<std::string>();
    Surd weight =
        j.contains("weight") ? surd_from_json(j.at("weight"), child(path, "weight")) : Surd(1);
    if (weight.sign() <= 0) throw ParseError(child(path, "weight"), "weight must be positive");
    try {
        if (kind == "matrix") {
            const json& nj = require(j, "n", path);
            if (!nj.is_number_integer()) throw ParseError(child(path, "n"), "expected an integer");
            return Block::matrix(nj.get<int>(), weight);
        }
        if (kind == "lf") {
            ExtSurd t = ext_surd_from_json(require(j, "t", path), child(path, "t"));
            return Block::free_group(t, weight);
        }
        if (kind == "r") return Block::hyperfinite(weight);
        if (kind == "opaque") {
            std::string name = require(j, "name", path).get<std::string>();
            FgGenerators fg;
            if (j.contains("fg_generators")) {
                const json& gj = j.at("fg_generators");
                if (gj.is_string() && gj.get<std::string>() == "all") {
                    fg.all_positive_rationals = true;
                } else if (gj.is_array()) {
                    for (size_t i = 0; i < gj.size(); ++i)
                        fg.generators.push_back(rational_from_json(
                            gj[i], index(child(path, "fg_generators"), i)));
                } else {
                    throw ParseError(child(path, "fg_generators"),
                                     "expected \"all\" or a list of rationals");
                }
            }
            Surd compression = j.contains("compression")
                                   ? surd_from_json(j.at("compression"), child(path, "compression"))
                                   : Surd(1);
            return Block::opaque(name, fg, weight, compression);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, e.what());
    }
    throw ParseError(child(path, "kind"), "unknown kind '" + kind + "'");
}

}  // namespace

json expression_to_json(const AlgebraExpression& e) {
    json summands = json::array();
    for (const auto& b : e.summands()) summands.push_back(block_to_json(b));
    return json{{"summands", summands}};
}

AlgebraExpression expression_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path.empty() ? "<root>" : path, "expected an object");
    const json& sj = require(j, "summands", path);
    if (!sj.is_array() || sj.empty())
        throw ParseError(child(path, "summands"), "expected a non-empty array");
    std::vector<Block> blocks;
    for (size_t i = 0; i < sj.size(); ++i)
        blocks.push_back(block_from_json(sj[i], index(child(path, "summands"), i)));
    try {
        return AlgebraExpression(std::move(blocks));
    } catch (const std::invalid_argument& e) {
        throw ParseError(child(path, "summands"), e.what());
    }
}

AlgebraExpression parse_expression(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("<input>", e.what());
    }
    return expression_from_json(j);
}

json free_product_to_json(const FreeProductExpression& fp) {
    json components = json::array();
    for (const auto& c : fp.components) components.push_back(expression_to_json(c));
    json cardinality;
    if (fp.infinite_index)
        cardinality = "inf";
    else
        cardinality = fp.components.size();
    return json{{"cardinality", cardinality}, {"components", components}};
}

FreeProductExpression free_product_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path.empty() ? "<root>" : path, "expected an object");
    FreeProductExpression fp;
    const json& cj = require(j, "cardinality", path);
    if (cj.is_string() && cj.get<std::string>() == "inf") {
        fp.infinite_index = true;
    } else if (!cj.is_number_integer()) {
        throw ParseError(child(path, "cardinality"), "expected an integer or \"inf\"");
    }
    const json& comps = require(j, "components", path);
    if (!comps.is_array()) throw ParseError(child(path, "components"), "expected an array");
    for (size_t i = 0; i < comps.size(); ++i)
        fp.components.push_back(
            expression_from_json(comps[i], index(child(path, "components"), i)));
    if (!fp.infinite_index &&
        cj.get<long>() != static_cast<long>(fp.components.size()))
        throw ParseError(child(path, "cardinality"),
                         "finite cardinality must match the component count");
    return fp;
}

FreeProductExpression parse_free_product(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("<input>", e.what());
    }
    return free_product_from_json(j);
}

namespace {

Eigen::MatrixXcd matrix_from_json(const json& j, int dim, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ParseError(path, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                                   " array");
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw ParseError(index(path, r), "expected a row of length " + std::to_string(dim));
        for (int c = 0; c < dim; ++c) {
            const json& entry = row[c];
            if (entry.is_number()) {
                m(r, c) = entry.get<double>();
            } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                       entry[1].is_number()) {
                m(r, c) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw ParseError(index(index(path, r), c), "expected [re, im] or a number");
            }
        }
    }
    return m;
}

}  // namespace

ModelState model_from_json(const json& j, const std::string& path) {
    const json& bj = require(j, "blocks", path);
    const json& wj = require(j, "weights", path);
    if (!bj.is_array() || bj.empty())
        throw ParseError(child(path, "blocks"), "expected a non-empty array of dimensions");
    if (!wj.is_array() || wj.size() != bj.size())
        throw ParseError(child(path, "weights"), "expected one weight per block");
    std::vector<int> dims;
    for (size_t i = 0; i < bj.size(); ++i) {
        if (!bj[i].is_number_integer())
            throw ParseError(index(child(path, "blocks"), i), "expected an integer dimension");
        dims.push_back(bj[i].get<int>());
    }
    std::vector<Rational> weights;
    for (size_t i = 0; i < wj.size(); ++i)
        weights.push_back(rational_from_json(wj[i], index(child(path, "weights"), i)));
    ModelState model = [&] {
        try {
            return ModelState(dims, weights);
        } catch (const std::invalid_argument& e) {
            throw ParseError(path.empty() ? "<root>" : path, e.what());
        }
    }();
    if (j.contains("elements")) {
        const json& ej = j.at("elements");
        if (!ej.is_object()) throw ParseError(child(path, "elements"), "expected an object");
        for (const auto& [name, blocks_json] : ej.items()) {
            std::string epath = child(child(path, "elements"), name);
            if (!blocks_json.is_array() || blocks_json.size() != dims.size())
                throw ParseError(epath, "expected one array per block");
            std::vector<Eigen::MatrixXcd> blocks;
            for (size_t i = 0; i < dims.size(); ++i)
                blocks.push_back(matrix_from_json(blocks_json[i], dims[i], index(epath, i)));
            model.add_element(name, std::move(blocks));
        }
    }
    return model;
}

WordSpec word_from_json(const json& j, const std::string& path) {
    WordSpec word;
    const json& cj = require(j, "coefficients", path);
    if (!cj.is_array() || cj.empty())
        throw ParseError(child(path, "coefficients"), "expected a non-empty array of names");
    for (const auto& c : cj) {
        if (!c.is_string()) throw ParseError(child(path, "coefficients"), "expected names");
        word.coefficients.push_back(c.get<std::string>());
    }
    word.projection = require(j, "projection", path).get<std::string>();
    return word;
}

}  // namespace freeprob
