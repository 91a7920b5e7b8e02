#include "scimetrics/pipeline.hpp"

#include "scimetrics/corpus.hpp"
#include "scimetrics/embed_store.hpp"
#include "scimetrics/errors.hpp"
#include "scimetrics/labeling.hpp"
#include "scimetrics/mapviz.hpp"
#include "scimetrics/reports.hpp"
#include "scimetrics/svg.hpp"
#include "scimetrics/synthetic.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace scimetrics {

namespace {

Corpus load(const RunConfig& c) {
    if (c.corpus.empty() || c.registry.empty()) throw ConfigError("both --corpus and --registry are required");
    if (!fs::exists(c.corpus)) throw ConfigError("corpus file not found: " + c.corpus.string());
    if (!fs::exists(c.registry)) throw ConfigError("registry file not found: " + c.registry.string());
    return load_corpus(c.corpus, c.registry, c.years);
}

EmbeddingMatrix load_embeddings_for(const RunConfig& c, const Corpus& corpus) {
    const fs::path path = c.embeddings_path();
    if (!fs::exists(path)) throw MissingArtifact(path.string());
    EmbeddingLoadOptions opt;
    opt.corpus = &corpus;
    EmbeddingMatrix emb = load_embeddings(path, opt);
    std::size_t missing = 0;
    std::string first;
    for (const Paper& p : corpus.papers())
        if (!emb.contains(p.id)) {
            if (missing++ == 0) first = p.id;
        }
    if (missing) throw DataError(fmt::format("{} papers have no embedding in {} (first: '{}')", missing, path.string(), first));
    return emb;
}

fs::path labels_dir(const RunConfig& c) { return c.out / "labels"; }
fs::path models_dir(const RunConfig& c) { return c.out / "models"; }

fs::path split_path(const RunConfig& c, LabelSource s, std::string_view part) {
    return labels_dir(c) / fmt::format("{}_{}.tsv", source_name(s), part);
}

LabeledSet require_labels(const fs::path& p) {
    if (!fs::exists(p)) throw MissingArtifact(p.string());
    return load_labeled_set(p);
}

void step_ingest(const RunConfig& c) {
    const Corpus corpus = load(c);
    const CorpusStats stats = corpus_stats(corpus);
    write_file(c.out / "corpus_stats.tsv", format_corpus_stats(stats));
    log_info(fmt::format("ingest: {} papers, {} journals, {} authors", corpus.size(), corpus.registry().size(),
                         corpus.author_index().size()));
}

void step_embed(const RunConfig& c) {
    const Corpus corpus = load(c);
    const EmbeddingMatrix emb = embed_corpus_synthetic(corpus, c.embed_dim, c.embed_seed);
    save_embeddings(emb, c.embeddings_path());
    log_info(fmt::format("embed: {} vectors of dimension {} -> {}", emb.size(), emb.dim(), c.embeddings_path().string()));
}

void step_label(const RunConfig& c) {
    const Corpus corpus = load(c);
    const LabeledSet journal = label_journal_based(corpus);
    const AuthorLabelMap authors = classify_authors(corpus);
    const LabeledSet author = label_author_based(corpus, authors);
    const fs::path dir = labels_dir(c);
    save_labeled_set(journal, dir / "journal.tsv");
    save_excluded(journal, dir / "journal_excluded.tsv");
    save_labeled_set(author, dir / "author.tsv");
    save_excluded(author, dir / "author_excluded.tsv");
    save_author_labels(authors, dir / "authors.tsv");
    for (const LabeledSet* set : {&journal, &author}) {
        const DatasetSplit split = split_dataset(*set, c.seed);
        save_labeled_set(split.train, split_path(c, set->source, "train"));
        save_labeled_set(split.validation, split_path(c, set->source, "validation"));
        save_labeled_set(split.test, split_path(c, set->source, "test"));
        log_info(fmt::format("label: {} set {} entries ({} positive), {} excluded; split {}/{}/{}",
                             source_name(set->source), set->size(), set->positives(), set->excluded.size(),
                             split.train.size(), split.validation.size(), split.test.size()));
    }
}

void step_train(const RunConfig& c) {
    const Corpus corpus = load(c);
    const EmbeddingMatrix emb = load_embeddings_for(c, corpus);
    for (LabelSource s : {LabelSource::JournalBased, LabelSource::AuthorBased}) {
        const LabeledSet train = require_labels(split_path(c, s, "train"));
        const LabeledSet validation = require_labels(split_path(c, s, "validation"));
        const ProbeModel model = train_probe(train, validation, emb, c.probe);
        save_model(model, models_dir(c) / fmt::format("{}.model", source_name(s)));
        log_info(fmt::format("train: {} probe, {} epochs, loss {:.4f}, validation accuracy {:.3f}", source_name(s),
                             model.epochs_run, model.final_loss, model.validation_accuracy));
    }
}

using ProbMap = std::map<std::string, double, std::less<>>;

ProbMap stream_probabilities(const RunConfig& c, const Corpus& corpus, LabelSource s, const fs::path& override_file,
                             const EmbeddingMatrix* emb) {
    ProbMap out;
    if (!override_file.empty()) {
        out = load_probabilities(override_file);
        for (const Paper& p : corpus.papers())
            if (!out.count(p.id))
                throw DataError(fmt::format("{} has no probability for paper '{}'", override_file.string(), p.id));
        return out;
    }
    const ProbeModel model = load_model(models_dir(c) / fmt::format("{}.model", source_name(s)));
    for (const Paper& p : corpus.papers()) out[p.id] = predict_proba(model, emb->at(p.id));
    return out;
}

EvalSample eval_sample(const RunConfig& c, LabelSource s, const std::string& name, const ProbMap& pj,
                       const ProbMap& pa) {
    std::vector<LabeledEntry> entries;
    const std::vector<std::string_view> parts = c.table_sample == "all"
                                                    ? std::vector<std::string_view>{"train", "validation", "test"}
                                                    : std::vector<std::string_view>{"validation", "test"};
    for (auto part : parts) {
        const LabeledSet set = require_labels(split_path(c, s, part));
        entries.insert(entries.end(), set.entries.begin(), set.entries.end());
    }
    EvalSample sample;
    sample.name = name;
    for (const auto& e : entries) {
        sample.labels.push_back(e.label);
        const double j = pj.at(e.paper_id), a = pa.at(e.paper_id);
        sample.p_journal.push_back(j);
        sample.p_author.push_back(a);
        sample.p_combined.push_back(fuse(j, a));
    }
    return sample;
}

CutoffChoice choose_cutoff(const RunConfig& c, std::span<const int> labels, std::span<const double> probs) {
    return c.cutoff_criterion == CutoffCriterion::F1 ? threshold_search(labels, probs, c.grid_step)
                                                     : youden_search(labels, probs, c.grid_step);
}

void step_fuse(const RunConfig& c) {
    const Corpus corpus = load(c);
    std::optional<EmbeddingMatrix> emb;
    if (c.journal_probs.empty() || c.author_probs.empty()) {
        // models are checked before embeddings so that the missing model is named
        for (auto [s, file] : {std::pair{LabelSource::JournalBased, c.journal_probs}, std::pair{LabelSource::AuthorBased, c.author_probs}}) {
            const fs::path model = models_dir(c) / fmt::format("{}.model", source_name(s));
            if (file.empty() && !fs::exists(model)) throw MissingArtifact(model.string());
        }
        emb = load_embeddings_for(c, corpus);
    }
    const ProbMap pj = stream_probabilities(c, corpus, LabelSource::JournalBased, c.journal_probs, emb ? &*emb : nullptr);
    const ProbMap pa = stream_probabilities(c, corpus, LabelSource::AuthorBased, c.author_probs, emb ? &*emb : nullptr);

    const EvalSample journal = eval_sample(c, LabelSource::JournalBased, "Journal", pj, pa);
    const EvalSample author = eval_sample(c, LabelSource::AuthorBased, "Author", pj, pa);
    const EvalSample combined = concat(journal, author, "Combined");

    const CutoffChoice cj = choose_cutoff(c, journal.labels, journal.p_journal);
    const CutoffChoice ca = choose_cutoff(c, author.labels, author.p_author);
    const CutoffChoice cc = choose_cutoff(c, combined.labels, combined.p_combined);

    const PerformanceTable table = performance_table(
        journal, author,
        {{Stream::Journal, 0.5}, {Stream::Journal, cj.cutoff}, {Stream::Author, 0.5}, {Stream::Author, ca.cutoff},
         {Stream::Combined, cc.cutoff}});
    write_file(c.out / "table1.txt", "Classifier performance\n" + format_performance_table(table) +
                                         "p_J: journal-based probe, p_A: author-based probe, p_C: their average.\n"
                                         "F1 = 2TP / (2TP + FP + FN); prediction positive iff p > cutoff.\n");

    std::string cut = "stream\tcutoff\tcriterion\tvalue\tselection_sample\tauc\n";
    const std::string crit = c.cutoff_criterion == CutoffCriterion::F1 ? "f1" : "youden";
    auto auc = [](const EvalSample& s, Stream st) { return roc_auc(roc_curve(s.labels, s.stream(st))); };
    cut += fmt::format("p_J\t{}\t{}\t{}\tJournal\t{}\n", format_double(cj.cutoff), crit, format_double(cj.value),
                       format_double(auc(journal, Stream::Journal)));
    cut += fmt::format("p_A\t{}\t{}\t{}\tAuthor\t{}\n", format_double(ca.cutoff), crit, format_double(ca.value),
                       format_double(auc(author, Stream::Author)));
    cut += fmt::format("p_C\t{}\t{}\t{}\tCombined\t{}\n", format_double(cc.cutoff), crit, format_double(cc.value),
                       format_double(auc(combined, Stream::Combined)));
    write_file(c.out / "cutoffs.tsv", cut);

    for (auto [name, sample, stream] : {std::tuple{"journal", &journal, Stream::Journal},
                                        std::tuple{"author", &author, Stream::Author},
                                        std::tuple{"combined", &combined, Stream::Combined}}) {
        std::string roc = "fpr\ttpr\tcutoff\n";
        for (const auto& pt : roc_curve(sample->labels, sample->stream(stream)))
            roc += fmt::format("{}\t{}\t{}\n", format_double(pt.fpr), format_double(pt.tpr), format_double(pt.cutoff));
        write_file(c.out / fmt::format("roc_{}.tsv", name), roc);
    }

    std::vector<FusedPrediction> preds;
    std::string classes = "paper_id\tp_C\thealth\n";
    constexpr std::size_t kBins = 50;
    std::vector<std::size_t> hj(kBins), ha(kBins), hc(kBins);
    auto bin = [](double p) { return std::min(kBins - 1, static_cast<std::size_t>(p * kBins)); };
    for (const Paper& p : corpus.papers()) {
        const double j = pj.at(p.id), a = pa.at(p.id), f = fuse(j, a);
        preds.push_back({p.id, j, a, f});
        classes += fmt::format("{}\t{}\t{}\n", p.id, format_double(f), f > cc.cutoff ? 1 : 0);
        ++hj[bin(j)];
        ++ha[bin(a)];
        ++hc[bin(f)];
    }
    save_predictions(preds, c.out / "predictions.tsv");
    write_file(c.out / "classification.tsv", classes);
    std::string hist = "bin_low\tbin_high\tp_J\tp_A\tp_C\n";
    for (std::size_t b = 0; b < kBins; ++b)
        hist += fmt::format("{:.2f}\t{:.2f}\t{}\t{}\t{}\n", static_cast<double>(b) / kBins,
                            static_cast<double>(b + 1) / kBins, hj[b], ha[b], hc[b]);
    write_file(c.out / "prob_histogram.tsv", hist);
    write_file(c.out / "prob_histogram.svg",
               histogram_svg({{"journal-based (p_J)", hj}, {"author-based (p_A)", ha}, {"combined (p_C)", hc}},
                             PlotFrame{"Distribution of classification probabilities"}));
    log_info(fmt::format("fuse: cutoffs p_J>{:.3f} p_A>{:.3f} p_C>{:.3f}", cj.cutoff, ca.cutoff, cc.cutoff));
}

void step_score(const RunConfig& c) {
    const Corpus corpus = load(c);
    const EmbeddingMatrix emb = load_embeddings_for(c, corpus);
    const PaperScores scores = compute_scores(corpus, emb, c.windows, c.edge_policy);
    save_scores(scores, c.out / "scores.tsv");
    const auto complete = std::count_if(scores.begin(), scores.end(), [](const ScoreRow& r) { return r.q && r.n && r.i; });
    log_info(fmt::format("score: {} papers, {} with complete scores ({} dropped at window edges or empty windows)",
                         scores.size(), complete, scores.size() - static_cast<std::size_t>(complete)));
}

std::map<std::string, int, std::less<>> load_classification(const fs::path& path) {
    if (!fs::exists(path)) throw MissingArtifact(path.string());
    std::istringstream in(read_file(path));
    std::map<std::string, int, std::less<>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || trim(line).empty()) continue;
        const auto f = split(trim(line), '\t');
        if (f.size() != 3) throw DataError(fmt::format("{} line {}: expected 3 fields", path.string(), lineno));
        out[f[0]] = f[2] == "1" ? 1 : 0;
    }
    return out;
}

/// Per-paper analysis variables aligned to corpus order; NaN marks missing.
struct Analysis {
    std::vector<double> citations, novelty, impact, quality;
    std::vector<double> health;
    std::vector<int> health_int, years;
    std::vector<std::size_t> journals;
    std::vector<std::string> journal_ids, outlets;
    PaperScores scores;
};

Analysis analysis_data(const RunConfig& c, const Corpus& corpus) {
    Analysis a;
    const auto classes = load_classification(c.out / "classification.tsv");
    const fs::path scores_path = c.out / "scores.tsv";
    if (!fs::exists(scores_path)) throw MissingArtifact(scores_path.string());
    const PaperScores loaded = load_scores(scores_path);
    std::map<std::string, const ScoreRow*, std::less<>> by_id;
    for (const auto& r : loaded) by_id[r.paper_id] = &r;

    a.citations = normalize_citations(corpus, c.citations);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Paper& p = corpus.paper(i);
        auto it = by_id.find(p.id);
        if (it == by_id.end()) throw DataError(fmt::format("{} has no row for paper '{}'", scores_path.string(), p.id));
        auto cls = classes.find(p.id);
        if (cls == classes.end()) throw DataError(fmt::format("classification has no row for paper '{}'", p.id));
        const ScoreRow& r = *it->second;
        a.scores.push_back(r);
        const bool complete = r.q && r.n && r.i;
        a.novelty.push_back(complete ? *r.n : kMissing);
        a.impact.push_back(complete ? *r.i : kMissing);
        a.quality.push_back(complete ? *r.q : kMissing);
        a.health.push_back(cls->second);
        a.health_int.push_back(cls->second);
        a.years.push_back(p.year);
        a.journal_ids.push_back(p.journal_id);
        const Journal& j = corpus.journal_of(i);
        a.outlets.push_back(j.group.empty() ? std::string(category_name(j.category)) : j.group);
    }
    a.journals = dense_groups(a.journal_ids);
    return a;
}

std::string bins_tsv(const std::vector<Bin>& bins) {
    std::string s = "mean_x\tmean_y\tcount\n";
    for (const auto& b : bins) s += fmt::format("{}\t{}\t{}\n", format_double(b.mean_x), format_double(b.mean_y), b.count);
    return s;
}

std::string crosstab_tsv(const Crosstab& t) {
    std::string s = "row\tcol\tcount\trow_share\tcol_share\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t k = 0; k < t.cols.size(); ++k)
            s += fmt::format("{}\t{}\t{}\t{}\t{}\n", t.rows[r], t.cols[k], t.counts[r][k],
                             format_double(t.row_share(r, k)), format_double(t.col_share(r, k)));
    return s;
}

void step_regress(const RunConfig& c) {
    const Corpus corpus = load(c);
    Analysis a = analysis_data(c, corpus);
    // analysis sample: complete scores and outcome
    std::vector<double> y = a.citations;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!std::isfinite(a.quality[i]) || !std::isfinite(y[i])) y[i] = kMissing;
    auto std_col = [&](const std::vector<double>& v) {
        std::vector<Score> s(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::isfinite(y[i]) && std::isfinite(v[i])) s[i] = v[i];
        const auto z = standardize(s);
        std::vector<double> out(v.size(), kMissing);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (z[i]) out[i] = *z[i];
        return out;
    };
    const Regressor n{"Novelty", std_col(a.novelty)};
    const Regressor imp{"Impact", std_col(a.impact)};
    const Regressor q{"Quality", std_col(a.quality)};
    const Regressor health{"Health", a.health};
    const std::vector<std::vector<Regressor>> specs = {{n}, {imp}, {n, imp}, {q}};

    std::vector<RegressionResult> t3, t4;
    for (bool fe : {false, true}) {
        const std::span<const std::size_t> groups = fe ? std::span<const std::size_t>(a.journals) : std::span<const std::size_t>();
        for (const auto& spec : specs) t3.push_back(ols(y, spec, groups));
        for (const auto& spec : specs) t4.push_back(interaction_model(y, health, spec, groups));
    }
    const std::vector<std::string> groups_hdr = {"Unconditional", "Conditional on Journal"};
    write_file(c.out / "table3.txt",
               format_regression_table("Prediction of citations (outcome: year-normalised citations; regressors in SD units)",
                                       t3, {"Novelty", "Impact", "Quality", "const"}, groups_hdr));
    write_file(c.out / "table4.txt",
               format_regression_table("Prediction of citations: health versus non-health",
                                       t4,
                                       {"Novelty", "Impact", "Quality", "Health", "Health x Novelty", "Health x Impact",
                                        "Health x Quality", "const"},
                                       groups_hdr));

    std::string corr = "a\tb\tcorrelation\n";
    const std::pair<const char*, const std::vector<double>*> vars[] = {
        {"novelty", &n.values}, {"impact", &imp.values}, {"quality", &q.values}, {"citations", &y}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            corr += fmt::format("{}\t{}\t{}\n", vars[i].first, vars[j].first,
                                format_double(correlation(*vars[i].second, *vars[j].second)));
    write_file(c.out / "correlations.tsv", corr);

    for (const auto& [name, reg] : {std::pair{"novelty", &n}, std::pair{"impact", &imp}, std::pair{"quality", &q}}) {
        write_file(c.out / fmt::format("binscatter_{}.tsv", name), bins_tsv(binned_scatter(reg->values, y, c.bins)));
        write_file(c.out / fmt::format("binscatter_{}_fe.tsv", name),
                   bins_tsv(binned_scatter(reg->values, y, c.bins, a.journals)));
    }

    std::map<std::string, std::string, std::less<>> ours, category;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        ours[corpus.paper(i).id] = a.health_int[i] ? "health" : "non-health";
        category[corpus.paper(i).id] = std::string(category_name(corpus.category_of(i)));
    }
    write_file(c.out / "crosstab_category.tsv", crosstab_tsv(crosstab(ours, category)));
    if (!c.external_classes.empty()) {
        if (!fs::exists(c.external_classes)) throw MissingArtifact(c.external_classes.string());
        std::map<std::string, std::string, std::less<>> ext;
        std::istringstream in(read_file(c.external_classes));
        std::string line;
        while (std::getline(in, line)) {
            const auto f = split(trim(line), '\t');
            if (f.size() >= 2 && f[0] != "paper_id") ext[f[0]] = f[1];
        }
        write_file(c.out / "crosstab_external.tsv", crosstab_tsv(crosstab(ours, ext)));
    }
    log_info(fmt::format("regress: {} observations", t3.front().n));
}

std::string series_tsv(const std::vector<SeriesPoint>& pts) {
    std::string s = "year\tgroup\tmean\tcount\n";
    for (const auto& p : pts)
        s += fmt::format("{}\t{}\t{}\t{}\n", p.year, p.group ? "health" : "non-health", format_double(p.mean), p.count);
    return s;
}

std::string series_svg(const std::vector<SeriesPoint>& pts, const std::string& title) {
    LineSeries h{"health", {}}, o{"non-health", {}};
    for (const auto& p : pts) (p.group ? h : o).points.emplace_back(p.year, p.mean);
    return line_chart_svg({h, o}, PlotFrame{title}, "year", title);
}

void step_series(const RunConfig& c) {
    const Corpus corpus = load(c);
    Analysis a = analysis_data(c, corpus);

    const auto shares = share_series(a.years, a.outlets, a.health_int);
    std::string s = "year\toutlet\tshare\tcount\n";
    std::map<std::string, LineSeries> lines;
    for (const auto& p : shares) {
        s += fmt::format("{}\t{}\t{}\t{}\n", p.year, p.outlet, format_double(p.share), p.count);
        auto& l = lines[p.outlet];
        l.name = p.outlet;
        l.points.emplace_back(p.year, p.share);
    }
    write_file(c.out / "series_share.tsv", s);
    std::vector<LineSeries> share_lines;
    for (auto& [k, l] : lines) share_lines.push_back(std::move(l));
    write_file(c.out / "series_share.svg",
               line_chart_svg(share_lines, PlotFrame{"Share of health economics papers by outlet"}, "year", "share"));

    for (const auto& [name, values] : {std::pair{"novelty", &a.novelty}, std::pair{"impact", &a.impact},
                                       std::pair{"quality", &a.quality}}) {
        const auto pts = annual_series(*values, a.years, a.health_int, a.journals);
        write_file(c.out / fmt::format("series_{}.tsv", name), series_tsv(pts));
        write_file(c.out / fmt::format("series_{}.svg", name), series_svg(pts, name));
    }

    const QualityDecomposition d = decompose_in_quality_sd(a.scores);
    auto dense = [](const std::vector<Score>& v) {
        std::vector<double> out(v.size(), kMissing);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i]) out[i] = *v[i];
        return out;
    };
    const auto ns = annual_series(dense(d.novelty_scaled), a.years, a.health_int, a.journals);
    const auto is = annual_series(dense(d.impact_scaled), a.years, a.health_int, a.journals);
    const auto qs = annual_series(dense(d.quality_scaled), a.years, a.health_int, a.journals);
    std::string dec = fmt::format("# quality_sd={}\nyear\tgroup\tnovelty_sd\timpact_sd\tquality_sd\tcount\n",
                                  format_double(d.quality_sd));
    LineSeries ln{"novelty (health)", {}}, li{"impact (health)", {}}, lq{"quality (health)", {}};
    for (std::size_t k = 0; k < ns.size(); ++k) {
        dec += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", ns[k].year, ns[k].group ? "health" : "non-health",
                           format_double(ns[k].mean), format_double(is[k].mean), format_double(qs[k].mean), ns[k].count);
        if (ns[k].group) {
            ln.points.emplace_back(ns[k].year, ns[k].mean);
            li.points.emplace_back(is[k].year, is[k].mean);
            lq.points.emplace_back(qs[k].year, qs[k].mean);
        }
    }
    write_file(c.out / "series_decomposition.tsv", dec);
    write_file(c.out / "series_decomposition.svg",
               line_chart_svg({ln, li, lq}, PlotFrame{"Quality decomposition (SD of quality)"}, "year", "SD of quality"));
    log_info(fmt::format("series: {} year-group cells", qs.size()));
}

void step_map(const RunConfig& c) {
    const Corpus corpus = load(c);
    const EmbeddingMatrix emb = load_embeddings_for(c, corpus);
    const auto classes_path = c.out / "predictions.tsv";
    const auto preds = load_predictions(classes_path);
    std::map<std::string, double, std::less<>> p_c;
    for (const auto& p : preds) p_c[p.paper_id] = p.p_combined;

    std::vector<std::string> ids, journals;
    for (const Paper& p : corpus.papers()) {
        ids.push_back(p.id);
        journals.push_back(p.journal_id);
    }
    const Eigen::MatrixXd x = stack_embeddings(emb, ids);
    const int n = static_cast<int>(ids.size());
    const int k = std::min({c.pca_dims, n - 1, static_cast<int>(emb.dim())});
    if (k < c.pca_dims) log_warning(fmt::format("map: PCA dimensions reduced from {} to {}", c.pca_dims, k));
    const PcaResult pc = pca(x, k);

    TsneOptions topt = c.tsne;
    const double max_perp = (n - 1) / 3.0;
    if (topt.perplexity >= max_perp) {
        topt.perplexity = std::max(1.0, std::floor(max_perp - 1e-9) - 1.0);
        log_warning(fmt::format("map: perplexity reduced to {} for {} papers", topt.perplexity, n));
    }
    const TsneResult ts = tsne(pc.scores, topt);
    const int n_clusters = std::min(c.clusters, n);
    const std::vector<int> raw = ward_cluster(ts.coords, n_clusters);
    const MergedClusters merged = merge_by_top_journal(raw, journals);

    std::string coords = "paper_id\tx\ty\tcluster\tmerged_cluster\n";
    std::vector<double> probs;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        coords += fmt::format("{}\t{}\t{}\t{}\t{}\n", ids[i], format_double(ts.coords[i][0]),
                              format_double(ts.coords[i][1]), raw[i], merged.labels[i]);
        auto it = p_c.find(ids[i]);
        if (it == p_c.end()) throw DataError(fmt::format("{} has no prediction for '{}'", classes_path.string(), ids[i]));
        probs.push_back(it->second);
    }
    write_file(c.out / "map_coords.tsv", coords);

    std::string cl = "cluster\tsize\tmodal_journal\ttop_journals\n";
    std::vector<std::string> legend;
    for (const auto& s : merged.clusters) {
        std::string top;
        for (const auto& [j, cnt] : s.top_journals) top += fmt::format("{}{}:{}", top.empty() ? "" : ";", j, cnt);
        cl += fmt::format("{}\t{}\t{}\t{}\n", s.label, s.size, s.modal_journal, top);
        std::string names;
        for (const auto& [j, cnt] : s.top_journals) names += (names.empty() ? "" : ", ") + j;
        legend.push_back(names);
    }
    write_file(c.out / "map_clusters.tsv", cl);

    std::string kl = "iteration\tkl\n";
    for (const auto& [it, v] : ts.kl_trace) kl += fmt::format("{}\t{}\n", it, format_double(v));
    write_file(c.out / "map_kl.tsv", kl);
    std::string pcs = "component\tvariance\tshare\n";
    for (int j = 0; j < k; ++j)
        pcs += fmt::format("{}\t{}\t{}\n", j + 1, format_double(pc.explained_variance[static_cast<std::size_t>(j)]),
                           format_double(pc.explained_share[static_cast<std::size_t>(j)]));
    write_file(c.out / "map_pca.tsv", pcs);

    emit_scatter_svg(ts.coords, ProbabilityColors{probs, "p_C"}, c.out / "map_predictions.svg",
                     PlotFrame{"Health economics predictions"});
    emit_scatter_svg(ts.coords, LabelColors{merged.labels, legend}, c.out / "map_clusters.svg",
                     PlotFrame{"Clusters merged by most common journal"});
    log_info(fmt::format("map: PCA to {}, t-SNE KL {:.4f} -> {:.4f}, {} clusters merged into {}", k, ts.initial_kl,
                         ts.final_kl, n_clusters, merged.clusters.size()));
}

}  // namespace

void run_step(std::string_view sub, const RunConfig& config) {
    validate(config);
    set_worker_threads(config.threads);
    fs::create_directories(config.out);
    if (sub == "ingest") step_ingest(config);
    else if (sub == "embed") step_embed(config);
    else if (sub == "label") step_label(config);
    else if (sub == "train") step_train(config);
    else if (sub == "fuse") step_fuse(config);
    else if (sub == "score") step_score(config);
    else if (sub == "regress") step_regress(config);
    else if (sub == "series") step_series(config);
    else if (sub == "map") step_map(config);
    else if (sub == "report") {
        step_ingest(config);
        if (config.embeddings.empty()) step_embed(config);
        step_label(config);
        step_train(config);
        step_fuse(config);
        step_score(config);
        step_regress(config);
        step_series(config);
        step_map(config);
    } else {
        throw ConfigError(fmt::format("unknown subcommand '{}'", sub));
    }
    write_manifest(config.out);
}

int run(std::string_view subcommand, const RunConfig& config) {
    try {
        run_step(subcommand, config);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

std::vector<ManifestEntry> write_manifest(const fs::path& out) {
    std::vector<ManifestEntry> entries;
    for (const auto& de : fs::recursive_directory_iterator(out)) {
        if (!de.is_regular_file()) continue;
        const std::string rel = fs::relative(de.path(), out).generic_string();
        if (rel == "manifest.tsv") continue;
        entries.push_back({rel, de.file_size(), sha256_file(de.path())});
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    std::string s = "path\tbytes\tsha256\n";
    for (const auto& e : entries) s += fmt::format("{}\t{}\t{}\n", e.path, e.bytes, e.sha256);
    write_file(out / "manifest.tsv", s);
    return entries;
}

std::vector<ManifestEntry> read_manifest(const fs::path& out) {
    const fs::path p = out / "manifest.tsv";
    if (!fs::exists(p)) throw MissingArtifact(p.string());
    std::istringstream in(read_file(p));
    std::vector<ManifestEntry> entries;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto f = split(line, '\t');
        if (f.size() != 3) continue;
        entries.push_back({f[0], std::stoull(f[1]), f[2]});
    }
    return entries;
}

void write_synthetic_corpus(std::size_t papers, std::uint64_t seed, const fs::path& dir) {
    SyntheticCorpusOptions opt;
    opt.papers = papers;
    opt.seed = seed;
    const SyntheticCorpus sc = generate_synthetic_corpus(opt);
    save_corpus(sc.corpus, dir / "corpus.jsonl");
    std::string reg;
    for (const auto& j : synthetic_registry_records())
        reg += fmt::format("{{\"id\":\"{}\",\"name\":\"{}\",\"category\":{},\"group\":\"{}\"}}\n", j.id, j.name,
                           static_cast<int>(j.category), j.group);
    write_file(dir / "registry.jsonl", reg);
    std::string truth = "paper_id\thealth\n";
    for (const auto& [id, h] : sc.planted_health) truth += fmt::format("{}\t{}\n", id, h);
    write_file(dir / "planted.tsv", truth);
}

}  // namespace scimetrics
