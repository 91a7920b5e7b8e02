#include "support.hpp"

#include "scimetrics/config.hpp"
#include "scimetrics/errors.hpp"
#include "scimetrics/pipeline.hpp"
#include "scimetrics/reports.hpp"
#include "scimetrics/synthetic.hpp"

#include <doctest.h>

#include <cstdlib>
#include <set>
#include <sys/wait.h>

using namespace scimetrics;
using namespace testing;

namespace {

const std::filesystem::path kData = SCIMETRICS_DATA_DIR;

RunConfig bundled(const std::filesystem::path& out) {
    RunConfig c;
    c.corpus = kData / "synth200" / "corpus.jsonl";
    c.registry = kData / "synth200" / "registry.jsonl";
    c.out = out;
    return c;
}

int exit_code(const std::string& args) {
    const int status = std::system((std::string(SCIMET_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config file parsing and validation") {
    RunConfig c;
    apply_config_text(c, R"(
# windows
window_backward = -3,-1
window_forward = 1, 3
edge_policy = shorten
grid_step = 0.01
probe_epochs = 200
cutoff_criterion = youden
tsne_perplexity = 12.5
citation_normalization = log1p
)");
    CHECK(c.windows.backward_from == -3);
    CHECK(c.windows.forward_to == 3);
    CHECK(c.edge_policy == EdgePolicy::Shorten);
    CHECK(c.grid_step == 0.01);
    CHECK(c.probe.epochs == 200);
    CHECK(c.cutoff_criterion == CutoffCriterion::Youden);
    CHECK(c.tsne.perplexity == 12.5);
    CHECK(c.citations == CitationNormalization::Log1p);
    CHECK_THROWS_AS(apply_config_text(c, "no_such_key = 1"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c, "grid_step = fast"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c, "just text"), ConfigError);

    RunConfig bad;
    bad.windows.backward_from = 2;
    bad.windows.backward_to = 1;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    RunConfig step;
    step.grid_step = 0.7;
    CHECK_THROWS_AS(validate(step), ConfigError);
}

TEST_CASE("defaults mirror the method constants") {
    const RunConfig c;
    CHECK(c.windows.backward_from == -5);
    CHECK(c.windows.backward_to == -1);
    CHECK(c.windows.forward_from == 1);
    CHECK(c.windows.forward_to == 5);
    CHECK(c.bins == 20);
    CHECK(c.pca_dims == 50);
    CHECK(c.clusters == 24);
    CHECK(c.grid_step == 0.001);
    CHECK(c.tsne.perplexity == 30.0);
    CHECK(c.tsne.iterations == 1000);
    CHECK(c.edge_policy == EdgePolicy::Drop);
}

TEST_CASE("the bundled example config parses") {
    RunConfig c;
    apply_config_file(c, kData / "example.conf");
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("steps name their missing prerequisites") {
    TempDir dir("pipeline_missing");
    const RunConfig c = bundled(dir.path);
    CHECK_THROWS_WITH_AS(run_step("score", c), doctest::Contains("embeddings.bin"), MissingArtifact);
    run_step("embed", c);
    CHECK_THROWS_WITH_AS(run_step("train", c), doctest::Contains("journal_train.tsv"), MissingArtifact);
    run_step("label", c);
    CHECK_THROWS_WITH_AS(run_step("fuse", c), doctest::Contains("journal.model"), MissingArtifact);
    CHECK(run("fuse", c) == 3);
    CHECK_THROWS_WITH_AS(run_step("regress", c), doctest::Contains("classification.tsv"), MissingArtifact);
    CHECK(run("nonsense", c) == 2);
    RunConfig no_corpus = c;
    no_corpus.corpus = dir.path / "absent.jsonl";
    CHECK(run("ingest", no_corpus) == 2);
}

TEST_CASE("report writes every artifact and a complete manifest") {
    TempDir dir("pipeline_report");
    const RunConfig c = bundled(dir.path);
    REQUIRE(run("report", c) == 0);
    const auto manifest = read_manifest(c.out);
    std::set<std::string> listed;
    for (const auto& e : manifest) {
        listed.insert(e.path);
        CHECK(e.sha256.size() == 64);
        CHECK(e.bytes == std::filesystem::file_size(c.out / e.path));
    }
    for (const char* f : {"corpus_stats.tsv", "embeddings.bin", "labels/journal.tsv", "labels/author_excluded.tsv",
                          "labels/authors.tsv", "labels/journal_train.tsv", "models/journal.model",
                          "models/author.model", "predictions.tsv", "table1.txt", "cutoffs.tsv", "classification.tsv",
                          "prob_histogram.tsv", "prob_histogram.svg", "roc_combined.tsv", "scores.tsv", "table3.txt",
                          "table4.txt", "correlations.tsv", "binscatter_novelty.tsv", "binscatter_quality_fe.tsv",
                          "crosstab_category.tsv", "series_share.tsv", "series_share.svg", "series_quality.tsv",
                          "series_decomposition.tsv", "series_decomposition.svg", "map_coords.tsv",
                          "map_clusters.tsv", "map_kl.tsv", "map_pca.tsv", "map_predictions.svg", "map_clusters.svg"})
        CHECK_MESSAGE(listed.count(f) == 1, f);
    CHECK(listed.count("manifest.tsv") == 0);

    const std::string t1 = read_file(c.out / "table1.txt");
    for (const char* needle : {"Journal Sample", "Author Sample", "Combined Sample", "Sensitivity", "Specificity",
                               "F1", "p_J>0.500", "p_A>0.500", "p_C>"})
        CHECK_MESSAGE(t1.find(needle) != std::string::npos, needle);
    const std::string t3 = read_file(c.out / "table3.txt");
    CHECK(t3.find("Journal FE") != std::string::npos);
    CHECK(t3.find("Novelty") != std::string::npos);
    CHECK(read_file(c.out / "table4.txt").find("Health x Quality") != std::string::npos);

    // re-running a single step leaves its outputs unchanged
    const std::string scores = read_file(c.out / "scores.tsv");
    REQUIRE(run("score", c) == 0);
    CHECK(read_file(c.out / "scores.tsv") == scores);
}

TEST_CASE("sidecar probability files replace the probes in fuse") {
    TempDir dir("pipeline_sidecar");
    RunConfig c = bundled(dir.path);
    REQUIRE(run("label", c) == 0);
    const Corpus corpus = load_corpus(c.corpus, c.registry);
    std::map<std::string, double, std::less<>> pj, pa;
    for (const Paper& p : corpus.papers()) {
        const bool health = corpus.category_of(*corpus.index_of(p.id)) == JournalCategory::HealthField;
        pj[p.id] = health ? 0.9 : 0.2;
        pa[p.id] = health ? 0.7 : 0.4;
    }
    save_probabilities(pj, dir.path / "pj.tsv");
    save_probabilities(pa, dir.path / "pa.tsv");
    c.journal_probs = dir.path / "pj.tsv";
    c.author_probs = dir.path / "pa.tsv";
    REQUIRE(run("fuse", c) == 0);  // no embeddings or models needed
    const auto preds = load_predictions(c.out / "predictions.tsv");
    REQUIRE(preds.size() == corpus.size());
    for (const auto& p : preds) {
        CHECK(p.p_journal == pj.at(p.paper_id));
        CHECK(p.p_combined == fuse(pj.at(p.paper_id), pa.at(p.paper_id)));
    }
}

TEST_CASE("embedding files from another writer are read without warnings") {
    TempDir dir("pipeline_embfile");
    RunConfig c = bundled(dir.path);
    const Corpus corpus = load_corpus(c.corpus, c.registry);
    // identical texts map to identical vectors
    const EmbeddingMatrix emb = embed_corpus_synthetic(corpus, 32, 5);
    save_embeddings(emb, dir.path / "external.bin");
    const EmbeddingMatrix back = load_embeddings(dir.path / "external.bin", {.expected_dim = 32, .corpus = &corpus});
    CHECK(last_embedding_load_warnings() == 0);
    CHECK(back == emb);
    c.embeddings = dir.path / "external.bin";
    CHECK(run("score", c) == 0);
}

TEST_CASE("performance table layout") {
    EvalSample j{"Journal", {1, 0, 1, 0}, {0.9, 0.2, 0.6, 0.4}, {0.8, 0.3, 0.4, 0.1}, {}};
    for (std::size_t i = 0; i < 4; ++i) j.p_combined.push_back(fuse(j.p_journal[i], j.p_author[i]));
    EvalSample a{"Author", {1, 0}, {0.3, 0.1}, {0.9, 0.2}, {0.6, 0.15}};
    const PerformanceTable t = performance_table(j, a, {{Stream::Journal, 0.5}, {Stream::Combined, 0.45}});
    CHECK(t.sample_sizes == std::vector<std::size_t>{4, 2, 6});
    REQUIRE(t.rows.size() == 2);
    CHECK(*t.rows[0].per_sample[0].f1 == 1.0);
    CHECK(*t.rows[0].per_sample[1].sensitivity == 0.0);
    const std::string s = format_performance_table(t);
    CHECK(s.find("p_J>0.500") != std::string::npos);
    CHECK(s.find("p_C>0.450") != std::string::npos);
    CHECK(s.find("Combined Sample (N=6)") != std::string::npos);
}

TEST_CASE("significance stars") {
    CHECK(stars(1.0, 1.0).empty());
    CHECK(stars(2.0, 1.0) == "*");
    CHECK(stars(2.7, 1.0) == "**");
    CHECK(stars(-3.5, 1.0) == "***");
}

TEST_CASE("synthetic corpus generator") {
    const SyntheticCorpus a = generate_synthetic_corpus({.papers = 300, .seed = 1});
    const SyntheticCorpus b = generate_synthetic_corpus({.papers = 300, .seed = 1});
    CHECK(a.corpus.papers() == b.corpus.papers());
    CHECK(a.corpus.size() == 300);
    CHECK(a.planted_health.size() == 300);
    std::size_t health = 0;
    for (const auto& [id, h] : a.planted_health) health += static_cast<std::size_t>(h);
    CHECK(health > 30);
    CHECK(health < 270);
    const auto& reg = a.corpus.registry();
    CHECK(reg.has_category(JournalCategory::HealthField));
    CHECK(reg.has_category(JournalCategory::GeneralInterest));
    CHECK(reg.has_category(JournalCategory::OtherField));
}

TEST_CASE("command-line exit codes") {
    TempDir dir("cli");
    const std::string corpus = (kData / "synth200" / "corpus.jsonl").string();
    const std::string registry = (kData / "synth200" / "registry.jsonl").string();
    const std::string out = (dir.path / "out").string();
    CHECK(exit_code("ingest --corpus " + corpus + " --registry " + registry + " --out " + out) == 0);
    CHECK(exit_code("ingest --edge-policy sideways --corpus " + corpus) == 2);
    CHECK(exit_code("ingest --config " + (dir.path / "none.conf").string()) == 2);
    CHECK(exit_code("score --corpus " + corpus + " --registry " + registry + " --out " + out) == 3);
    CHECK(exit_code("fuse --corpus " + corpus + " --registry " + registry + " --out " + out) == 3);
    CHECK(exit_code("") == 2);
    CHECK(exit_code("synth --papers 50 --seed 3 --out " + (dir.path / "s").string()) == 0);
    CHECK(std::filesystem::exists(dir.path / "s" / "corpus.jsonl"));
}
