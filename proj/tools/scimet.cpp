// scimet: command-line driver for the scientometrics pipeline.
#include "scimetrics/errors.hpp"
#include "scimetrics/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace scimetrics;

namespace {

struct Flags {
    std::string config, corpus, registry, embeddings, out, edge_policy;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> grid_step;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "key = value configuration file");
    sub->add_option("--corpus", f.corpus, "corpus JSON-lines file");
    sub->add_option("--registry", f.registry, "journal registry JSON-lines file");
    sub->add_option("--embeddings", f.embeddings, "binary embedding file (default <out>/embeddings.bin)");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--seed", f.seed, "split seed");
    sub->add_option("--threads", f.threads, "worker threads");
    sub->add_option("--grid-step", f.grid_step, "cutoff grid step");
    sub->add_option("--edge-policy", f.edge_policy, "window edge policy")->check(CLI::IsMember({"drop", "shorten"}));
}

// Config file first, then explicit flags on top.
RunConfig build_config(const Flags& f) {
    RunConfig c;
    if (!f.config.empty()) apply_config_file(c, f.config);
    if (!f.corpus.empty()) c.corpus = f.corpus;
    if (!f.registry.empty()) c.registry = f.registry;
    if (!f.embeddings.empty()) c.embeddings = f.embeddings;
    if (!f.out.empty()) c.out = f.out;
    if (!f.edge_policy.empty()) c.edge_policy = parse_edge_policy(f.edge_policy);
    if (f.seed) c.seed = *f.seed;
    if (f.threads) c.threads = *f.threads;
    if (f.grid_step) c.grid_step = *f.grid_step;
    return c;
}

}  // namespace

std::string_view describe(std::string_view name) {
    if (name == "ingest") return "validate the corpus and write summary counts";
    if (name == "embed") return "write hashed bag-of-words embeddings";
    if (name == "label") return "build journal- and author-based labeled sets and splits";
    if (name == "train") return "train one probe per labeled set";
    if (name == "fuse") return "combine probes, pick cutoffs, write the classifier table";
    if (name == "score") return "backward, forward and contemporaneous similarity scores";
    if (name == "regress") return "citation regressions and binned scatters";
    if (name == "series") return "annual series and their plots";
    if (name == "map") return "PCA, t-SNE, clustering and map plots";
    if (name == "report") return "run every step";
    return "";
}

int main(int argc, char** argv) {
    CLI::App app{"Scientometrics pipeline: labels, probes, similarity scores, regressions and maps"};
    app.require_subcommand(1);
    Flags flags;
    for (std::string_view name : kSubcommands) {
        auto* sub = app.add_subcommand(std::string(name), std::string(describe(name)));
        add_common(sub, flags);
    }
    std::size_t synth_papers = 200;
    std::uint64_t synth_seed = 2024;
    std::string synth_out = "data";
    auto* synth = app.add_subcommand("synth", "write a synthetic corpus and registry");
    synth->add_option("--papers", synth_papers, "number of papers")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        if (chosen == synth) {
            write_synthetic_corpus(synth_papers, synth_seed, synth_out);
            return 0;
        }
        return run(chosen->get_name(), build_config(flags));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
