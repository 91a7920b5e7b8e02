#include "scimetrics/config.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <charconv>

namespace scimetrics {

namespace {

template <class T>
T number(std::string_view key, std::string_view v) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError(fmt::format("config key '{}': '{}' is not a valid number", key, v));
    return out;
}

std::pair<int, int> offsets(std::string_view key, std::string_view v) {
    const auto parts = split(v, ',');
    if (parts.size() != 2) throw ConfigError(fmt::format("config key '{}': expected 'a,b'", key));
    return {number<int>(key, trim(parts[0])), number<int>(key, trim(parts[1]))};
}

bool boolean(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(fmt::format("config key '{}': '{}' is not a boolean", key, v));
}

}  // namespace

void apply_config_value(RunConfig& c, std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    if (key == "corpus") c.corpus = std::string(v);
    else if (key == "registry") c.registry = std::string(v);
    else if (key == "embeddings") c.embeddings = std::string(v);
    else if (key == "out") c.out = std::string(v);
    else if (key == "journal_probs") c.journal_probs = std::string(v);
    else if (key == "author_probs") c.author_probs = std::string(v);
    else if (key == "external_classes") c.external_classes = std::string(v);
    else if (key == "year_first") c.years.first = number<int>(key, v);
    else if (key == "year_last") c.years.last = number<int>(key, v);
    else if (key == "window_backward") std::tie(c.windows.backward_from, c.windows.backward_to) = offsets(key, v);
    else if (key == "window_forward") std::tie(c.windows.forward_from, c.windows.forward_to) = offsets(key, v);
    else if (key == "edge_policy") c.edge_policy = parse_edge_policy(v);
    else if (key == "citation_normalization") c.citations = parse_citation_normalization(v);
    else if (key == "seed") c.seed = number<std::uint64_t>(key, v);
    else if (key == "probe_learning_rate") c.probe.learning_rate = number<double>(key, v);
    else if (key == "probe_epochs") c.probe.epochs = number<int>(key, v);
    else if (key == "probe_l2") c.probe.l2 = number<double>(key, v);
    else if (key == "probe_seed") c.probe.seed = number<std::uint64_t>(key, v);
    else if (key == "probe_standardize") c.probe.standardize = boolean(key, v);
    else if (key == "grid_step") c.grid_step = number<double>(key, v);
    else if (key == "cutoff_criterion") {
        if (v == "f1") c.cutoff_criterion = CutoffCriterion::F1;
        else if (v == "youden") c.cutoff_criterion = CutoffCriterion::Youden;
        else throw ConfigError(fmt::format("cutoff_criterion must be 'f1' or 'youden', got '{}'", v));
    } else if (key == "table_sample") {
        if (v != "heldout" && v != "all") throw ConfigError("table_sample must be 'heldout' or 'all'");
        c.table_sample = std::string(v);
    } else if (key == "embed_dim") c.embed_dim = number<std::uint32_t>(key, v);
    else if (key == "embed_seed") c.embed_seed = number<std::uint64_t>(key, v);
    else if (key == "bins") c.bins = number<std::size_t>(key, v);
    else if (key == "pca_dims") c.pca_dims = number<int>(key, v);
    else if (key == "clusters") c.clusters = number<int>(key, v);
    else if (key == "tsne_perplexity") c.tsne.perplexity = number<double>(key, v);
    else if (key == "tsne_iterations") c.tsne.iterations = number<int>(key, v);
    else if (key == "tsne_seed") c.tsne.seed = number<std::uint64_t>(key, v);
    else if (key == "tsne_learning_rate") c.tsne.learning_rate = number<double>(key, v);
    else if (key == "threads") c.threads = number<unsigned>(key, v);
    else throw ConfigError(fmt::format("unknown config key '{}'", key));
}

void apply_config_text(RunConfig& config, std::string_view text, std::string_view origin) {
    std::size_t lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{} line {}: expected 'key = value'", origin, lineno));
        apply_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    apply_config_text(config, read_file(path), path.string());
}

void validate(const RunConfig& c) {
    if (c.windows.backward_from > c.windows.backward_to || c.windows.forward_from > c.windows.forward_to)
        throw ConfigError("window offsets must satisfy a <= b");
    if (!(c.grid_step > 0.0 && c.grid_step <= 0.5)) throw ConfigError("grid_step must lie in (0, 0.5]");
    if (c.years.first > c.years.last) throw ConfigError("year_first is after year_last");
    if (c.bins == 0) throw ConfigError("bins must be positive");
    if (c.pca_dims < 1 || c.clusters < 1) throw ConfigError("pca_dims and clusters must be positive");
    if (c.embed_dim < 2) throw ConfigError("embed_dim must be at least 2");
    if (c.threads == 0) throw ConfigError("threads must be positive");
    if (c.out.empty()) throw ConfigError("output directory is empty");
}

}  // namespace scimetrics
