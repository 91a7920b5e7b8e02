#include "scimetrics/probe.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace scimetrics {

double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow
double softplus(double z) noexcept { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

template <class T>
double score_impl(const ProbeModel& m, std::span<const T> v) {
    if (v.size() != m.weights.size())
        throw DataError(fmt::format("probe expects dimension {}, got {}", m.weights.size(), v.size()));
    double s = m.bias;
    if (m.feature_mean.empty()) {
        for (std::size_t k = 0; k < v.size(); ++k) s += m.weights[k] * static_cast<double>(v[k]);
    } else {
        for (std::size_t k = 0; k < v.size(); ++k)
            s += m.weights[k] * ((static_cast<double>(v[k]) - m.feature_mean[k]) / m.feature_scale[k]);
    }
    return s;
}

struct Objective {
    const std::vector<std::vector<double>>& x;
    std::span<const int> y;
    double l2;

    double loss(const std::vector<double>& w, double b) const {
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double z = b;
            for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * x[i][k];
            // -[y log p + (1-y) log(1-p)] = softplus(z) - y z
            total += softplus(z) - (y[i] == 1 ? z : 0.0);
        }
        double reg = 0.0;
        for (double wk : w) reg += wk * wk;
        return total / static_cast<double>(x.size()) + 0.5 * l2 * reg;
    }

    void gradient(const std::vector<double>& w, double b, std::vector<double>& gw, double& gb) const {
        std::fill(gw.begin(), gw.end(), 0.0);
        gb = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double z = b;
            for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * x[i][k];
            const double r = sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0);
            for (std::size_t k = 0; k < w.size(); ++k) gw[k] += r * x[i][k];
            gb += r;
        }
        const double inv_n = 1.0 / static_cast<double>(x.size());
        for (std::size_t k = 0; k < w.size(); ++k) gw[k] = gw[k] * inv_n + l2 * w[k];
        gb *= inv_n;
    }
};

void check_labels(std::span<const int> y) {
    bool pos = false, neg = false;
    for (int l : y) {
        if (l == 1) pos = true;
        else if (l == 0) neg = true;
        else throw DataError(fmt::format("label {} is not 0 or 1", l));
    }
    if (!pos || !neg) throw DataError("training set contains a single class");
}

}  // namespace

double ProbeModel::score(std::span<const float> v) const { return score_impl(*this, v); }
double ProbeModel::score(std::span<const double> v) const { return score_impl(*this, v); }

ProbeModel train_probe(const std::vector<std::vector<double>>& x_raw, std::span<const int> y, const ProbeHyper& hyper,
                       std::vector<double>* loss_trace) {
    if (x_raw.size() != y.size()) throw DataError("design and labels differ in length");
    if (x_raw.empty()) throw DataError("empty training set");
    check_labels(y);
    if (!(hyper.learning_rate > 0) || hyper.epochs < 0 || hyper.l2 < 0)
        throw ConfigError("probe hyperparameters out of range");
    const std::size_t n = x_raw.size();
    const std::size_t d = x_raw.front().size();
    for (const auto& row : x_raw)
        if (row.size() != d) throw DataError("ragged training design");

    ProbeModel model;
    model.hyper = hyper;
    std::vector<std::vector<double>> x = x_raw;
    if (hyper.standardize) {
        model.feature_mean.assign(d, 0.0);
        model.feature_scale.assign(d, 0.0);
        for (const auto& row : x)
            for (std::size_t k = 0; k < d; ++k) model.feature_mean[k] += row[k];
        for (double& m : model.feature_mean) m /= static_cast<double>(n);
        for (const auto& row : x)
            for (std::size_t k = 0; k < d; ++k) {
                const double c = row[k] - model.feature_mean[k];
                model.feature_scale[k] += c * c;
            }
        for (double& s : model.feature_scale) {
            s = std::sqrt(s / static_cast<double>(n));
            if (!(s > 1e-12)) s = 1.0;  // constant feature: centre only
        }
        for (auto& row : x)
            for (std::size_t k = 0; k < d; ++k) row[k] = (row[k] - model.feature_mean[k]) / model.feature_scale[k];
    }

    Objective obj{x, y, hyper.l2};
    std::vector<double> w(d, 0.0), gw(d), w_next(d);
    double b = 0.0, gb = 0.0;
    double lr = hyper.learning_rate;
    double loss = obj.loss(w, b);
    if (loss_trace) loss_trace->assign(1, loss);
    int epoch = 0;
    for (; epoch < hyper.epochs; ++epoch) {
        obj.gradient(w, b, gw, gb);
        double gnorm2 = gb * gb;
        for (double g : gw) gnorm2 += g * g;
        if (gnorm2 < 1e-24) break;
        double next_loss = 0.0;
        double b_next = 0.0;
        int halvings = 0;
        while (true) {
            for (std::size_t k = 0; k < d; ++k) w_next[k] = w[k] - lr * gw[k];
            b_next = b - lr * gb;
            next_loss = obj.loss(w_next, b_next);
            if (next_loss <= loss) break;
            lr *= 0.5;
            if (++halvings > 60) break;
        }
        if (next_loss > loss) break;  // no descent possible at machine precision
        w.swap(w_next);
        b = b_next;
        loss = next_loss;
        if (loss_trace) loss_trace->push_back(loss);
    }
    model.weights = std::move(w);
    model.bias = b;
    model.epochs_run = epoch;
    model.final_loss = loss;
    return model;
}

ProbeModel train_probe(const LabeledSet& train, const LabeledSet& validation, const EmbeddingMatrix& emb,
                       const ProbeHyper& hyper) {
    auto design = [&emb](const LabeledSet& set, std::vector<std::vector<double>>& x, std::vector<int>& y) {
        for (const auto& e : set.entries) {
            auto v = emb.find(e.paper_id);
            if (!v) throw DataError(fmt::format("missing embedding for paper '{}'", e.paper_id));
            x.emplace_back(v->begin(), v->end());
            y.push_back(e.label);
        }
    };
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    design(train, x, y);
    ProbeModel model = train_probe(x, y, hyper);

    std::vector<std::vector<double>> xv;
    std::vector<int> yv;
    design(validation, xv, yv);
    if (!xv.empty()) {
        double loss = 0.0;
        std::size_t correct = 0;
        for (std::size_t i = 0; i < xv.size(); ++i) {
            const double z = model.score(std::span<const double>(xv[i]));
            loss += softplus(z) - (yv[i] == 1 ? z : 0.0);
            if ((z > 0.0 ? 1 : 0) == yv[i]) ++correct;
        }
        model.validation_loss = loss / static_cast<double>(xv.size());
        model.validation_accuracy = static_cast<double>(correct) / static_cast<double>(xv.size());
    }
    return model;
}

double predict_proba(const ProbeModel& model, std::span<const float> v) { return sigmoid(model.score(v)); }
double predict_proba(const ProbeModel& model, std::span<const double> v) { return sigmoid(model.score(v)); }

void save_model(const ProbeModel& m, const std::filesystem::path& path) {
    std::string out = "probe-model 1\n";
    out += fmt::format("dim {}\n", m.dim());
    out += fmt::format("learning_rate {}\n", format_double(m.hyper.learning_rate));
    out += fmt::format("epochs {}\n", m.hyper.epochs);
    out += fmt::format("l2 {}\n", format_double(m.hyper.l2));
    out += fmt::format("seed {}\n", m.hyper.seed);
    out += fmt::format("standardize {}\n", m.feature_mean.empty() ? 0 : 1);
    out += fmt::format("epochs_run {}\n", m.epochs_run);
    out += fmt::format("final_loss {}\n", format_double(m.final_loss));
    out += fmt::format("validation_loss {}\n", format_double(m.validation_loss));
    out += fmt::format("validation_accuracy {}\n", format_double(m.validation_accuracy));
    out += fmt::format("bias {}\n", format_double(m.bias));
    out += "weights\n";
    for (double w : m.weights) out += format_double(w) + "\n";
    if (!m.feature_mean.empty()) {
        out += "feature_mean\n";
        for (double v : m.feature_mean) out += format_double(v) + "\n";
        out += "feature_scale\n";
        for (double v : m.feature_scale) out += format_double(v) + "\n";
    }
    write_file(path, out);
}

namespace {

double parse_number(std::string_view s, const std::string& where) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError(fmt::format("{}: bad number '{}'", where, s));
    return v;
}

}  // namespace

ProbeModel load_model(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifact(path.string());
    std::istringstream in(read_file(path));
    std::string line;
    const std::string where = path.string();
    if (!std::getline(in, line) || line != "probe-model 1") throw DataError(where + ": not a probe model file");
    ProbeModel m;
    std::size_t dim = 0;
    bool standardize = false;
    auto read_list = [&](std::vector<double>& dst) {
        dst.clear();
        for (std::size_t k = 0; k < dim; ++k) {
            if (!std::getline(in, line)) throw DataError(where + ": truncated vector");
            dst.push_back(parse_number(trim(line), where));
        }
    };
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto sp = t.find(' ');
        const std::string key(t.substr(0, sp));
        const std::string_view val = sp == std::string_view::npos ? std::string_view{} : trim(t.substr(sp + 1));
        if (key == "dim") dim = static_cast<std::size_t>(parse_number(val, where));
        else if (key == "learning_rate") m.hyper.learning_rate = parse_number(val, where);
        else if (key == "epochs") m.hyper.epochs = static_cast<int>(parse_number(val, where));
        else if (key == "l2") m.hyper.l2 = parse_number(val, where);
        else if (key == "seed") m.hyper.seed = std::stoull(std::string(val));
        else if (key == "standardize") standardize = val == "1";
        else if (key == "epochs_run") m.epochs_run = static_cast<int>(parse_number(val, where));
        else if (key == "final_loss") m.final_loss = parse_number(val, where);
        else if (key == "validation_loss") m.validation_loss = parse_number(val, where);
        else if (key == "validation_accuracy") m.validation_accuracy = parse_number(val, where);
        else if (key == "bias") m.bias = parse_number(val, where);
        else if (key == "weights") read_list(m.weights);
        else if (key == "feature_mean") read_list(m.feature_mean);
        else if (key == "feature_scale") read_list(m.feature_scale);
        else throw DataError(fmt::format("{}: unknown key '{}'", where, key));
    }
    m.hyper.standardize = standardize;
    if (m.weights.size() != dim || dim == 0) throw DataError(where + ": weight count does not match dim");
    if (standardize && (m.feature_mean.size() != dim || m.feature_scale.size() != dim))
        throw DataError(where + ": standardization vectors missing");
    for (double w : m.weights)
        if (!std::isfinite(w)) throw DataError(where + ": non-finite weight");
    return m;
}

ConfusionCounts confusion(std::span<const int> labels, std::span<const double> probs, double cutoff) {
    if (labels.size() != probs.size()) throw DataError("labels and probabilities differ in length");
    if (labels.empty()) throw DataError("empty evaluation set");
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) throw DataError(fmt::format("cutoff {} outside [0,1]", cutoff));
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool pred = probs[i] > cutoff;
        if (labels[i] == 1) (pred ? c.tp : c.fn)++;
        else (pred ? c.fp : c.tn)++;
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c) {
    Metrics m;
    if (c.tp + c.fn > 0) m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (c.tn + c.fp > 0) m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    if (2 * c.tp + c.fp + c.fn > 0)
        m.f1 = 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
    return m;
}

double fuse(double p_journal, double p_author) {
    if (!(p_journal >= 0.0 && p_journal <= 1.0) || !(p_author >= 0.0 && p_author <= 1.0))
        throw DataError(fmt::format("probabilities ({}, {}) outside [0,1]", p_journal, p_author));
    return 0.5 * (p_journal + p_author);
}

namespace {

struct SortedScores {
    std::vector<double> pos, neg;  // ascending

    SortedScores(std::span<const int> labels, std::span<const double> probs) {
        if (labels.size() != probs.size()) throw DataError("labels and probabilities differ in length");
        for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(probs[i]);
        if (pos.empty() || neg.empty()) throw DataError("degenerate label set: both classes are required");
        std::sort(pos.begin(), pos.end());
        std::sort(neg.begin(), neg.end());
    }

    // counts with p > c
    static std::size_t above(const std::vector<double>& v, double c) {
        return static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), c));
    }

    ConfusionCounts at(double c) const {
        ConfusionCounts k;
        k.tp = above(pos, c);
        k.fn = pos.size() - k.tp;
        k.fp = above(neg, c);
        k.tn = neg.size() - k.fp;
        return k;
    }
};

template <class Objective>
CutoffChoice grid_search(std::span<const int> labels, std::span<const double> probs, double step, Objective f) {
    if (!(step > 0.0 && step <= 0.5)) throw DataError(fmt::format("grid step {} outside (0, 0.5]", step));
    const SortedScores s(labels, probs);
    const auto steps = static_cast<long>(std::floor(1.0 / step + 1e-9));
    // k / (1/step) is the correctly rounded grid point when 1/step is an integer (0.052, not 0.052000000000000005)
    const double inv = std::round(1.0 / step);
    const bool integral = std::abs(inv - 1.0 / step) < 1e-9;
    CutoffChoice best{0.0, -std::numeric_limits<double>::infinity()};
    for (long k = 0; k <= steps; ++k) {
        const double c = std::min(1.0, integral ? static_cast<double>(k) / inv : static_cast<double>(k) * step);
        const double v = f(s.at(c));
        if (v > best.value) best = {c, v};
    }
    return best;
}

}  // namespace

CutoffChoice threshold_search(std::span<const int> labels, std::span<const double> probs, double step) {
    return grid_search(labels, probs, step, [](const ConfusionCounts& c) { return *metrics(c).f1; });
}

CutoffChoice youden_search(std::span<const int> labels, std::span<const double> probs, double step) {
    return grid_search(labels, probs, step, [](const ConfusionCounts& c) {
        const Metrics m = metrics(c);
        return *m.sensitivity + *m.specificity - 1.0;
    });
}

std::vector<RocPoint> roc_curve(std::span<const int> labels, std::span<const double> probs) {
    const SortedScores s(labels, probs);
    std::vector<double> cut(probs.begin(), probs.end());
    std::sort(cut.begin(), cut.end(), std::greater<>());
    cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
    const double np = static_cast<double>(s.pos.size()), nn = static_cast<double>(s.neg.size());
    std::vector<RocPoint> curve;
    curve.reserve(cut.size() + 1);
    for (double c : cut) {
        const auto k = s.at(c);
        curve.push_back({static_cast<double>(k.fp) / nn, static_cast<double>(k.tp) / np, c});
    }
    curve.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});
    return curve;
}

double roc_auc(std::span<const RocPoint> curve) {
    double area = 0.0;
    double x = 0.0, y = 0.0;
    for (const auto& p : curve) {
        area += (p.fpr - x) * (p.tpr + y) * 0.5;
        x = p.fpr;
        y = p.tpr;
    }
    return area;
}

std::map<std::string, double, std::less<>> load_probabilities(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifact(path.string());
    std::istringstream in(read_file(path));
    std::map<std::string, double, std::less<>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || (lineno == 1 && t.rfind("paper_id", 0) == 0)) continue;
        const auto f = split(t, '\t');
        if (f.size() != 2) throw DataError(fmt::format("{} line {}: expected paper_id<TAB>probability", path.string(), lineno));
        const double p = parse_number(f[1], fmt::format("{} line {}", path.string(), lineno));
        if (!(p >= 0.0 && p <= 1.0)) throw DataError(fmt::format("{} line {}: probability outside [0,1]", path.string(), lineno));
        if (!out.emplace(f[0], p).second) throw DataError(fmt::format("{} line {}: duplicate id '{}'", path.string(), lineno, f[0]));
    }
    return out;
}

void save_probabilities(const std::map<std::string, double, std::less<>>& probs, const std::filesystem::path& path) {
    std::string out = "paper_id\tprobability\n";
    for (const auto& [id, p] : probs) out += fmt::format("{}\t{}\n", id, format_double(p));
    write_file(path, out);
}

void save_predictions(std::span<const FusedPrediction> preds, const std::filesystem::path& path) {
    std::string out = "paper_id\tp_J\tp_A\tp_C\n";
    for (const auto& p : preds)
        out += fmt::format("{}\t{}\t{}\t{}\n", p.paper_id, format_double(p.p_journal), format_double(p.p_author),
                           format_double(p.p_combined));
    write_file(path, out);
}

std::vector<FusedPrediction> load_predictions(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifact(path.string());
    std::istringstream in(read_file(path));
    std::vector<FusedPrediction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || (lineno == 1 && t.rfind("paper_id", 0) == 0)) continue;
        const auto f = split(t, '\t');
        const std::string where = fmt::format("{} line {}", path.string(), lineno);
        if (f.size() != 4) throw DataError(where + ": expected 4 fields");
        out.push_back({f[0], parse_number(f[1], where), parse_number(f[2], where), parse_number(f[3], where)});
    }
    return out;
}

}  // namespace scimetrics
