#include "slampoint/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slampoint/common.hpp"

namespace slampoint::models {

using nlohmann::json;

// ---------------------------------------------------------------- predict

double TrainedModel::predict_one(const std::vector<double>& x) const {
    return std::visit([&](const auto& m) { return m.predict_one(x); }, model);
}

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& X) {
    const std::size_t width = model.schema.width();
    std::vector<double> out;
    out.reserve(X.size());
    for (const auto& row : X) {
        if (row.size() != width)
            throw SchemaMismatch("row width " + std::to_string(row.size()) +
                                 " != schema width " + std::to_string(width));
        out.push_back(model.predict_one(row));
    }
    return out;
}

std::vector<int> predict_label(const TrainedModel& model, const Matrix& X, double threshold) {
    std::vector<int> out;
    out.reserve(X.size());
    for (double p : predict_proba(model, X)) out.push_back(p >= threshold ? 1 : 0);
    return out;
}

// ---------------------------------------------------------------- json pieces

namespace {

json tree_to_json(const Tree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes)
        nodes.push_back({n.feature, n.threshold, n.value, n.gain, n.left, n.right});
    return json{{"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& j) {
    Tree tree;
    for (const auto& n : j.at("nodes")) {
        Tree::Node node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.value = n.at(2).get<double>();
        node.gain = n.at(3).get<double>();
        node.left = n.at(4).get<int>();
        node.right = n.at(5).get<int>();
        tree.nodes.push_back(node);
    }
    return tree;
}

json hyperparams_to_json(const Hyperparams& h) {
    json values = json::object();
    for (const auto& [name, value] : h.values) values[name] = value;
    json ranges = json::object();
    for (const auto& [name, r] : h.ranges)
        ranges[name] = {{"lo", r.lo}, {"hi", r.hi}, {"log", r.log_scale}, {"int", r.integer}};
    return json{{"values", std::move(values)}, {"ranges", std::move(ranges)}};
}

Hyperparams hyperparams_from_json(const json& j) {
    Hyperparams h;
    for (const auto& [name, value] : j.at("values").items()) h.values[name] = value.get<double>();
    for (const auto& [name, r] : j.at("ranges").items())
        h.ranges[name] = {r.at("lo").get<double>(), r.at("hi").get<double>(),
                          r.at("log").get<bool>(), r.at("int").get<bool>()};
    return h;
}

json model_payload(const TrainedModel& m) {
    json j;
    switch (m.family) {
        case Family::Baseline: {
            const auto& b = std::get<BaselineModel>(m.model);
            j = {{"p", b.p}, {"n_fit", b.n_fit}};
            break;
        }
        case Family::Logistic: {
            const auto& l = std::get<LinearModel>(m.model);
            j = {{"weights", l.weights},       {"bias", l.bias}, {"alpha", l.learning_rate},
                 {"epochs", l.epochs},         {"seed", l.seed}, {"epoch_loss", l.epoch_loss}};
            break;
        }
        case Family::Forest: {
            const auto& f = std::get<ForestModel>(m.model);
            json trees = json::array();
            for (const auto& t : f.trees) trees.push_back(tree_to_json(t));
            j = {{"n_trees", f.params.n_trees},
                 {"m_try", f.params.m_try},
                 {"max_depth", f.params.max_depth},
                 {"min_leaf", f.params.min_leaf},
                 {"bootstrap", f.params.bootstrap},
                 {"seed", f.params.seed},
                 {"trees", std::move(trees)}};
            break;
        }
        case Family::AdaBoost: {
            const auto& a = std::get<AdaBoostModel>(m.model);
            json learners = json::array();
            for (const auto& t : a.learners) learners.push_back(tree_to_json(t));
            j = {{"rounds", a.params.rounds},
                 {"weak_depth", a.params.weak_depth},
                 {"alphas", a.alphas},
                 {"round_errors", a.round_errors},
                 {"learners", std::move(learners)}};
            break;
        }
        case Family::Gbt: {
            const auto& g = std::get<GbtModel>(m.model);
            json trees = json::array();
            for (const auto& t : g.trees) trees.push_back(tree_to_json(t));
            j = {{"rounds", g.params.rounds},
                 {"eta", g.params.eta},
                 {"lambda", g.params.lambda},
                 {"gamma", g.params.gamma},
                 {"max_depth", g.params.max_depth},
                 {"scale_pos_weight", g.params.scale_pos_weight},
                 {"seed", g.params.seed},
                 {"base_score", g.base_score},
                 {"feature_gain", g.feature_gain},
                 {"trees", std::move(trees)}};
            break;
        }
    }
    return j;
}

void load_payload(TrainedModel& m, const json& j) {
    switch (m.family) {
        case Family::Baseline: {
            BaselineModel b;
            b.p = j.at("p").get<double>();
            b.n_fit = j.at("n_fit").get<std::size_t>();
            m.model = b;
            break;
        }
        case Family::Logistic: {
            LinearModel l;
            l.weights = j.at("weights").get<std::vector<double>>();
            l.bias = j.at("bias").get<double>();
            l.learning_rate = j.at("alpha").get<double>();
            l.epochs = j.at("epochs").get<int>();
            l.seed = j.at("seed").get<std::uint64_t>();
            l.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
            m.model = std::move(l);
            break;
        }
        case Family::Forest: {
            ForestModel f;
            f.params.n_trees = j.at("n_trees").get<int>();
            f.params.m_try = j.at("m_try").get<int>();
            f.params.max_depth = j.at("max_depth").get<int>();
            f.params.min_leaf = j.at("min_leaf").get<int>();
            f.params.bootstrap = j.at("bootstrap").get<bool>();
            f.params.seed = j.at("seed").get<std::uint64_t>();
            for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
            m.model = std::move(f);
            break;
        }
        case Family::AdaBoost: {
            AdaBoostModel a;
            a.params.rounds = j.at("rounds").get<int>();
            a.params.weak_depth = j.at("weak_depth").get<int>();
            a.alphas = j.at("alphas").get<std::vector<double>>();
            a.round_errors = j.at("round_errors").get<std::vector<double>>();
            for (const auto& t : j.at("learners")) a.learners.push_back(tree_from_json(t));
            m.model = std::move(a);
            break;
        }
        case Family::Gbt: {
            GbtModel g;
            g.params.rounds = j.at("rounds").get<int>();
            g.params.eta = j.at("eta").get<double>();
            g.params.lambda = j.at("lambda").get<double>();
            g.params.gamma = j.at("gamma").get<double>();
            g.params.max_depth = j.at("max_depth").get<int>();
            g.params.scale_pos_weight = j.at("scale_pos_weight").get<double>();
            g.params.seed = j.at("seed").get<std::uint64_t>();
            g.base_score = j.at("base_score").get<double>();
            g.feature_gain = j.at("feature_gain").get<std::vector<double>>();
            for (const auto& t : j.at("trees")) g.trees.push_back(tree_from_json(t));
            m.model = std::move(g);
            break;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- files

std::string serialize_model(const TrainedModel& model) {
    json j;
    j["format"] = "slampoint-model";
    j["version"] = 1;
    j["family"] = family_name(model.family);
    j["serve"] = model.serve;
    j["seed"] = model.seed;
    j["schema_fingerprint"] = hex64(model.schema.fingerprint());
    j["schema_text"] = model.schema.to_text();
    j["hyperparams"] = hyperparams_to_json(model.hyperparams);
    std::vector<std::string> ids = model.training_match_ids;
    std::sort(ids.begin(), ids.end());
    j["training_match_ids"] = std::move(ids);
    j["model"] = model_payload(model);
    return j.dump(1) + "\n";
}

TrainedModel deserialize_model(const std::string& text) {
    json j = json::parse(text);
    if (j.at("format").get<std::string>() != "slampoint-model")
        throw std::runtime_error("not a slampoint model file");
    if (j.at("version").get<int>() != 1)
        throw std::runtime_error("unsupported model file version");
    TrainedModel m;
    m.family = family_from_name(j.at("family").get<std::string>());
    m.serve = j.at("serve").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.schema = featureset::FeatureSchema::from_text(j.at("schema_text").get<std::string>());
    m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    m.training_match_ids = j.at("training_match_ids").get<std::vector<std::string>>();
    load_payload(m, j.at("model"));
    const std::string recorded = j.at("schema_fingerprint").get<std::string>();
    if (recorded != hex64(m.schema.fingerprint()))
        throw std::runtime_error("schema fingerprint mismatch in model file");
    return m;
}

void write_model_file(const std::string& path, const TrainedModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_model(model);
}

TrainedModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace slampoint::models
