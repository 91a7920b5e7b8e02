#include "scimetrics/synthetic.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numeric>

namespace scimetrics {

namespace {

// Three sub-topic waves per field; each wave peaks at a different point of
// the sample period.
const std::array<std::vector<const char*>, 3> kHealthWords = {{
    {"health", "insurance", "medicaid", "medicare", "hospital", "physician", "premium", "coverage", "moral",
     "hazard", "reimbursement", "payment", "providers", "managed", "care"},
    {"infant", "birth", "weight", "fetal", "childhood", "mortality", "nutrition", "disease", "prenatal",
     "maternal", "early", "life", "adult", "longevity", "malaria"},
    {"drug", "pharmaceutical", "prescription", "obesity", "smoking", "mental", "cancer", "treatment", "patients",
     "opioid", "vaccination", "nursing", "clinical", "diagnosis", "hospitalisation"},
}};

const std::array<std::vector<const char*>, 3> kOtherWords = {{
    {"trade", "tariff", "exports", "exchange", "rate", "monetary", "inflation", "currency", "imports", "gravity",
     "multinational", "offshoring", "shocks", "business", "cycle"},
    {"growth", "productivity", "innovation", "firms", "capital", "investment", "credit", "banking", "financial",
     "entrepreneurs", "misallocation", "technology", "urbanization", "industrialization", "savings"},
    {"estimator", "asymptotic", "inference", "identification", "auction", "equilibrium", "bargaining", "games",
     "mechanism", "tax", "labor", "wages", "schooling", "unemployment", "minimum"},
}};

const std::vector<const char*> kCommonWords = {
    "we", "estimate", "effect", "evidence", "model", "data", "policy", "results", "show", "using", "analysis",
    "market", "impact", "find", "effects", "theory", "empirical", "economic", "study", "the", "of", "and",
    "in", "on", "a", "for", "with", "from", "between", "new", "large", "panel", "causal", "design", "changes",
    "outcomes", "income", "costs", "welfare", "reform"};

struct JournalSpec {
    const char* id;
    const char* name;
    int category;
    const char* group;
};

constexpr JournalSpec kJournals[] = {
    {"JHE", "Journal of Health Economics", 1, "health"},
    {"HE", "Health Economics", 1, "health"},
    {"AJHE", "American Journal of Health Economics", 1, "health"},
    {"EJHE", "European Journal of Health Economics", 1, "health"},
    {"IJHEM", "International Journal of Health Economics and Management", 1, "health"},
    {"AER", "American Economic Review", 2, "top5"},
    {"JPE", "Journal of Political Economy", 2, "top5"},
    {"QJE", "Quarterly Journal of Economics", 2, "top5"},
    {"ECMA", "Econometrica", 2, "top5"},
    {"REStud", "Review of Economic Studies", 2, "top5"},
    {"AEJApplied", "AEJ: Applied Economics", 2, "general"},
    {"AEJPolicy", "AEJ: Economic Policy", 2, "general"},
    {"REStat", "Review of Economics and Statistics", 2, "general"},
    {"JEEA", "Journal of the European Economic Association", 2, "general"},
    {"EJ", "Economic Journal", 2, "general"},
    {"JHR", "Journal of Human Resources", 2, "general"},
    {"RAND", "RAND Journal of Economics", 2, "general"},
    {"JPubE", "Journal of Public Economics", 2, "field"},
    {"JDevEcon", "Journal of Development Economics", 2, "field"},
    {"JoLE", "Journal of Labor Economics", 2, "field"},
    {"AEJMacro", "AEJ: Macroeconomics", 3, "field"},
    {"JoLE", "Journal of Labor Economics", 3, "field"},
    {"JPubE", "Journal of Public Economics", 3, "field"},
    {"JEconGrowth", "Journal of Economic Growth", 3, "field"},
    {"JDevEcon", "Journal of Development Economics", 3, "field"},
    {"TE", "Theoretical Economics", 3, "field"},
    {"JIE", "Journal of International Economics", 3, "field"},
    {"JEconometrics", "Journal of Econometrics", 3, "field"},
};

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[rng.below(v.size())];
}

std::size_t pick_weighted(Rng& rng, const std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double u = rng.uniform() * total;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (u < w[k]) return k;
        u -= w[k];
    }
    return w.size() - 1;
}

// Poisson via inversion for small means, normal approximation beyond.
std::int64_t poisson(Rng& rng, double mean) {
    if (mean > 50.0) return std::max<std::int64_t>(0, std::llround(mean + std::sqrt(mean) * rng.normal()));
    const double l = std::exp(-mean);
    std::int64_t k = 0;
    double p = rng.uniform();
    while (p > l) {
        ++k;
        p *= rng.uniform();
    }
    return k;
}

}  // namespace

std::vector<Journal> synthetic_registry_records() {
    std::vector<Journal> out;
    for (const auto& j : kJournals) out.push_back({j.id, j.name, static_cast<JournalCategory>(j.category), j.group});
    return out;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusOptions& opt) {
    if (opt.papers == 0) throw ConfigError("synthetic corpus needs at least one paper");
    if (opt.first_year > opt.last_year) throw ConfigError("synthetic corpus year range is empty");
    Rng rng(opt.seed);
    JournalRegistry registry;
    for (auto& j : synthetic_registry_records()) registry.add(std::move(j));

    std::vector<std::string> health_field, general, other_field;
    for (const auto& [id, j] : registry.journals()) {
        switch (j.category) {
            case JournalCategory::HealthField: health_field.push_back(id); break;
            case JournalCategory::GeneralInterest: general.push_back(id); break;
            case JournalCategory::OtherField: other_field.push_back(id); break;
        }
    }

    // Author pools scale with the corpus; ~3.5 papers per author.
    const std::size_t pool = std::max<std::size_t>(8, opt.papers / 7);
    std::vector<std::string> health_authors, other_authors;
    for (std::size_t k = 0; k < pool; ++k) health_authors.push_back(fmt::format("ha{:04}", k));
    for (std::size_t k = 0; k < 2 * pool; ++k) other_authors.push_back(fmt::format("oa{:04}", k));

    const int span = opt.last_year - opt.first_year;
    SyntheticCorpus out;
    std::vector<Paper> papers;
    papers.reserve(opt.papers);
    for (std::size_t n = 0; n < opt.papers; ++n) {
        Paper p;
        p.id = fmt::format("p{:05}", n);
        // spread papers evenly over the years, then jitter
        p.year = opt.first_year + static_cast<int>((n * static_cast<std::size_t>(span + 1)) / opt.papers);
        const double tau = span > 0 ? static_cast<double>(p.year - opt.first_year) / span : 0.5;

        const double u = rng.uniform();
        JournalCategory cat = u < 0.30 ? JournalCategory::HealthField
                              : u < 0.62 ? JournalCategory::GeneralInterest
                                         : JournalCategory::OtherField;
        double p_health = 0.0;
        switch (cat) {
            case JournalCategory::HealthField:
                p.journal_id = pick(rng, health_field);
                p_health = 0.97;
                break;
            case JournalCategory::GeneralInterest:
                p.journal_id = pick(rng, general);
                p_health = 0.06 + 0.10 * tau;
                break;
            case JournalCategory::OtherField:
                p.journal_id = pick(rng, other_field);
                p_health = 0.04 + 0.06 * tau;
                break;
        }
        const int health = rng.uniform() < p_health ? 1 : 0;
        out.planted_health[p.id] = health;

        const auto& topic = health ? kHealthWords : kOtherWords;
        const auto& cross = health ? kOtherWords : kHealthWords;
        // wave weights drift over the sample period
        std::vector<double> wave(3);
        for (int k = 0; k < 3; ++k) {
            const double centre = (k + 0.5) / 3.0;
            wave[static_cast<std::size_t>(k)] = std::exp(-std::pow((tau - centre) / 0.25, 2));
        }
        const std::size_t own_wave = pick_weighted(rng, wave);
        auto word = [&]() -> std::string {
            const double r = rng.uniform();
            if (r < 0.40) return pick(rng, topic[own_wave]);
            if (r < 0.52) return pick(rng, topic[rng.below(3)]);
            if (r < 0.58) return pick(rng, cross[rng.below(3)]);
            return pick(rng, kCommonWords);
        };
        const std::size_t title_len = 5 + rng.below(6);
        for (std::size_t k = 0; k < title_len; ++k) {
            std::string w = word();
            if (k == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            p.title += (k ? " " : "") + w;
        }
        const std::size_t abstract_len = 40 + rng.below(40);
        for (std::size_t k = 0; k < abstract_len; ++k) p.abstract += (k ? " " : "") + word();
        p.abstract += ".";

        const std::size_t n_authors = 1 + rng.below(3);
        for (std::size_t k = 0; k < n_authors; ++k) {
            const bool own = rng.uniform() < 0.93;
            const auto& pool_ref = (health == 1) == own ? health_authors : other_authors;
            std::string a = pick(rng, pool_ref);
            if (std::find(p.author_ids.begin(), p.author_ids.end(), a) == p.author_ids.end())
                p.author_ids.push_back(std::move(a));
        }

        const double prestige = cat == JournalCategory::GeneralInterest ? 1.6 : 1.0;
        const double age = static_cast<double>(opt.last_year - p.year + 1);
        const double mean = prestige * (2.0 + 1.5 * age) * std::exp(0.6 * rng.normal());
        p.citations = poisson(rng, mean);
        papers.push_back(std::move(p));
    }
    out.corpus = Corpus(std::move(papers), std::move(registry), YearRange{opt.first_year, opt.last_year});
    return out;
}

}  // namespace scimetrics
