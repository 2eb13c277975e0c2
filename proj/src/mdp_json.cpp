#include "rlx/mdp_json.hpp"

#include "rlx/environments.hpp"
#include "rlx/errors.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <string>

namespace rlx {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
    if (!doc.is_object())
        throw ParseError("<root>: expected a JSON object");
    auto it = doc.find(key);
    if (it == doc.end())
        throw ParseError(std::string(key) + ": missing field");
    return *it;
}

int require_positive_int(const json& doc, const char* key) {
    const json& v = require(doc, key);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ParseError(std::string(key) + ": expected a positive integer");
    return v.get<int>();
}

const json& array_of(const json& v, std::size_t length, const std::string& path) {
    if (!v.is_array())
        throw ParseError(path + ": expected an array");
    if (v.size() != length)
        throw ParseError(path + ": expected " + std::to_string(length) + " entries, got " +
                         std::to_string(v.size()));
    return v;
}

double number_at(const json& v, const std::string& path) {
    if (!v.is_number())
        throw ParseError(path + ": expected a number");
    return v.get<double>();
}

std::string index_path(const std::string& base, std::initializer_list<int> idx) {
    std::string out = base;
    for (int i : idx)
        out += "[" + std::to_string(i) + "]";
    return out;
}

struct Shape {
    int S, A, H;
    bool stationary;
    int layers() const { return stationary ? 1 : H; }
};

Shape read_shape(const json& doc) {
    Shape sh{require_positive_int(doc, "S"), require_positive_int(doc, "A"), require_positive_int(doc, "H"), true};
    const json& st = require(doc, "stationary");
    if (!st.is_boolean())
        throw ParseError("stationary: expected a boolean");
    sh.stationary = st.get<bool>();
    return sh;
}

/// The [t] level, or the whole node for stationary files.
const json& layer_node(const json& root, const Shape& sh, int l, const std::string& name) {
    if (sh.stationary)
        return root;
    return array_of(root, sh.H, name)[l];
}

template <class Fn>
void for_each_cell(const json& root, const Shape& sh, const std::string& name, Fn&& fn) {
    if (!sh.stationary)
        array_of(root, sh.H, name);
    for (int l = 0; l < sh.layers(); ++l) {
        const std::string lp = sh.stationary ? name : index_path(name, {l});
        const json& layer = array_of(layer_node(root, sh, l, name), sh.S, lp);
        for (int s = 0; s < sh.S; ++s) {
            const std::string sp = lp + "[" + std::to_string(s) + "]";
            const json& row = array_of(layer[s], sh.A, sp);
            for (int a = 0; a < sh.A; ++a)
                fn(l, s, a, row[a], sp + "[" + std::to_string(a) + "]");
        }
    }
}

json nest_cells(const Shape& sh, const std::function<json(int, int, int)>& cell) {
    json layers = json::array();
    for (int l = 0; l < sh.layers(); ++l) {
        json states = json::array();
        for (int s = 0; s < sh.S; ++s) {
            json actions = json::array();
            for (int a = 0; a < sh.A; ++a)
                actions.push_back(cell(l, s, a));
            states.push_back(std::move(actions));
        }
        layers.push_back(std::move(states));
    }
    return sh.stationary ? layers[0] : layers;
}

std::vector<double> read_rho(const json& doc, int S) {
    const json& rho = array_of(require(doc, "rho"), S, "rho");
    std::vector<double> out(S);
    for (int s = 0; s < S; ++s)
        out[s] = number_at(rho[s], index_path("rho", {s}));
    return out;
}

} // namespace

json mdp_to_json(const TabularMDP& mdp) {
    const Shape sh{mdp.num_states(), mdp.num_actions(), mdp.horizon(), mdp.stationary()};
    json doc;
    doc["S"] = sh.S;
    doc["A"] = sh.A;
    doc["H"] = sh.H;
    doc["rho"] = std::vector<double>(mdp.initial_distribution().begin(), mdp.initial_distribution().end());
    doc["stationary"] = sh.stationary;
    doc["mean_reward"] = nest_cells(sh, [&](int l, int s, int a) { return json(mdp.mean_reward(l, s, a)); });

    bool any_noise = false;
    for (double sd : mdp.reward_std_table())
        any_noise = any_noise || sd != 0.0;
    doc["reward_std"] = any_noise ? nest_cells(sh, [&](int l, int s, int a) { return json(mdp.reward_std(l, s, a)); })
                                  : json(nullptr);
    doc["transition"] = nest_cells(sh, [&](int l, int s, int a) {
        auto row = mdp.transition(l, s, a);
        return json(std::vector<double>(row.begin(), row.end()));
    });
    return doc;
}

TabularMDP mdp_from_json(const json& doc) {
    const Shape sh = read_shape(doc);
    TabularMDP mdp(sh.S, sh.A, sh.H, sh.stationary);
    const auto rho = read_rho(doc, sh.S);
    std::copy(rho.begin(), rho.end(), mdp.initial_distribution().begin());

    for_each_cell(require(doc, "mean_reward"), sh, "mean_reward",
                  [&](int l, int s, int a, const json& v, const std::string& path) {
                      mdp.set_mean_reward(l, s, a, number_at(v, path));
                  });
    const json& noise = require(doc, "reward_std");
    if (!noise.is_null())
        for_each_cell(noise, sh, "reward_std", [&](int l, int s, int a, const json& v, const std::string& path) {
            mdp.set_reward_std(l, s, a, number_at(v, path));
        });
    for_each_cell(require(doc, "transition"), sh, "transition",
                  [&](int l, int s, int a, const json& v, const std::string& path) {
                      const json& row = array_of(v, sh.S, path);
                      auto out = mdp.transition_row(l, s, a);
                      for (int n = 0; n < sh.S; ++n)
                          out[n] = number_at(row[n], path + "[" + std::to_string(n) + "]");
                  });
    mdp.validate();
    return mdp;
}

json posterior_to_json(const Posterior& posterior) {
    const Shape sh{posterior.num_states(), posterior.num_actions(), posterior.horizon(), posterior.stationary()};
    json doc;
    doc["S"] = sh.S;
    doc["A"] = sh.A;
    doc["H"] = sh.H;
    doc["rho"] = std::vector<double>(posterior.initial_distribution().begin(), posterior.initial_distribution().end());
    doc["stationary"] = sh.stationary;
    doc["dirichlet"] = nest_cells(sh, [&](int l, int s, int a) {
        auto row = posterior.dirichlet(l, s, a);
        return json(std::vector<double>(row.begin(), row.end()));
    });
    doc["normal_gamma"] = nest_cells(sh, [&](int l, int s, int a) {
        const auto& ng = posterior.normal_gamma(l, s, a);
        return json{{"mu0", ng.mu0}, {"lambda", ng.lambda}, {"alpha", ng.alpha}, {"beta", ng.beta}};
    });
    return doc;
}

Posterior posterior_from_json(const json& doc) {
    const Shape sh = read_shape(doc);
    Posterior posterior(sh.S, sh.A, sh.H, sh.stationary);
    posterior.set_initial_distribution(read_rho(doc, sh.S));
    for_each_cell(require(doc, "dirichlet"), sh, "dirichlet",
                  [&](int l, int s, int a, const json& v, const std::string& path) {
                      const json& row = array_of(v, sh.S, path);
                      auto out = posterior.dirichlet_row(l, s, a);
                      for (int n = 0; n < sh.S; ++n)
                          out[n] = number_at(row[n], path + "[" + std::to_string(n) + "]");
                  });
    for_each_cell(require(doc, "normal_gamma"), sh, "normal_gamma",
                  [&](int l, int s, int a, const json& v, const std::string& path) {
                      if (!v.is_object())
                          throw ParseError(path + ": expected an object");
                      auto field = [&](const char* key) {
                          auto it = v.find(key);
                          if (it == v.end())
                              throw ParseError(path + "." + key + ": missing field");
                          return number_at(*it, path + "." + key);
                      };
                      posterior.normal_gamma_cell(l, s, a) = {field("mu0"), field("lambda"), field("alpha"),
                                                              field("beta")};
                  });
    posterior.validate();
    return posterior;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(1) << '\n';
}

TabularMDP load_mdp(const std::filesystem::path& path) { return mdp_from_json(read_json_file(path)); }

void save_mdp(const TabularMDP& mdp, const std::filesystem::path& path) { write_json_file(mdp_to_json(mdp), path); }

void save_posterior(const Posterior& posterior, const std::filesystem::path& path) {
    write_json_file(posterior_to_json(posterior), path);
}

Posterior load_posterior(const std::filesystem::path& path) { return posterior_from_json(read_json_file(path)); }

} // namespace rlx
