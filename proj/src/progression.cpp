#include "forge/progression.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "forge/csv.hpp"
#include "forge/hash.hpp"

namespace forge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_universe(const SpecializationMatrix& a, const SpecializationMatrix& b) {
    if (a.countries() != b.countries() || a.products() != b.products())
        throw ForgeError(ErrorKind::UniverseMismatch, "specialization matrices cover different countries or products");
}

const Matrix& rca_of(const SpecializationMatrix& s) {
    if (!s.rca.same_labels(s.m))
        throw ForgeError(ErrorKind::InvalidArgument, "specialization matrix carries no RCA values for features");
    return s.rca;
}

bool all_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

} // namespace

const ProductModel* ProgressionModelSet::find(const std::string& product) const {
    for (const auto& m : models)
        if (m.product == product) return &m;
    return nullptr;
}

ProgressionModelSet train_progression_models(std::span<const TrainingWindow> windows, const ProgressionParams& params) {
    if (windows.empty()) throw ForgeError(ErrorKind::InvalidArgument, "progression training needs at least one window");
    for (const auto& w : windows) {
        require_same_universe(*w.t0, *w.t1);
        require_same_universe(*windows.front().t0, *w.t0);
        rca_of(*w.t0);
    }
    const auto& first = *windows.front().t0;
    const std::size_t np = first.m.n_cols();

    ProgressionModelSet set;
    set.feature_products = first.products();
    set.params = params;
    set.train_year = first.year;

    // Examples are (window, country) pairs; order is window-major so the
    // sample set does not depend on anything but the inputs.
    struct Example {
        std::size_t window;
        std::size_t country;
    };
    for (std::size_t p = 0; p < np; ++p) {
        ProductModel model;
        model.product = set.feature_products[p];
        std::mt19937_64 rng(mix_seed(params.seed, model.product));

        std::vector<Example> pos, neg;
        for (std::size_t w = 0; w < windows.size(); ++w) {
            const auto& m0 = windows[w].t0->m;
            const auto& m1 = windows[w].t1->m;
            for (std::size_t c = 0; c < m0.n_rows(); ++c) {
                if (m0(c, p)) continue;
                (m1(c, p) ? pos : neg).push_back({w, c});
            }
        }
        model.positives = static_cast<int>(pos.size());
        model.negatives = static_cast<int>(neg.size());
        const auto total = pos.size() + neg.size();
        model.prior = total ? static_cast<double>(pos.size()) / static_cast<double>(total) : 0.0;
        if (pos.empty() || neg.empty()) {
            set.models.push_back(std::move(model));
            continue;
        }

        const auto cap = static_cast<std::size_t>(std::floor(params.max_negative_ratio * static_cast<double>(pos.size())));
        if (neg.size() > cap && cap > 0) {
            for (std::size_t k = 0; k < cap; ++k)
                std::swap(neg[k], neg[k + uniform_index(rng, neg.size() - k)]);
            neg.resize(cap);
        }

        std::vector<Example> rows(pos);
        rows.insert(rows.end(), neg.begin(), neg.end());
        std::sort(rows.begin(), rows.end(), [](const Example& a, const Example& b) {
            return a.window != b.window ? a.window < b.window : a.country < b.country;
        });
        FeatureTable x{np, {}};
        std::vector<std::uint8_t> y;
        for (const auto& e : rows) {
            const auto r = windows[e.window].t0->rca.row(e.country);
            x.values.insert(x.values.end(), r.begin(), r.end());
            y.push_back(windows[e.window].t1->m(e.country, p));
        }
        model.ensemble = TreeEnsemble::fit(x, y, params.trees, rng());
        model.status = ModelStatus::Fitted;
        set.models.push_back(std::move(model));
    }
    return set;
}

ProgressionModelSet train_progression_models(const SpecializationMatrix& m_t0, const SpecializationMatrix& m_t1,
                                             const ProgressionParams& params) {
    const TrainingWindow window{&m_t0, &m_t1};
    return train_progression_models(std::span<const TrainingWindow>(&window, 1), params);
}

std::optional<double> ProgressionForecast::probability_of(const std::string& country, const std::string& product) const {
    auto c = std::find(countries.begin(), countries.end(), country);
    auto p = std::find(products.begin(), products.end(), product);
    if (c == countries.end() || p == products.end()) return std::nullopt;
    const auto ci = static_cast<std::size_t>(c - countries.begin()), pi = static_cast<std::size_t>(p - products.begin());
    if (!is_candidate(ci, pi)) return std::nullopt;
    return at(ci, pi);
}

namespace {

ProgressionForecast empty_forecast(const RcaMatrix& rca, int horizon) {
    ProgressionForecast f;
    f.countries = rca.values.row_labels();
    f.products = rca.values.col_labels();
    f.base_year = rca.year;
    f.horizon_years = horizon;
    f.candidate.assign(f.countries.size() * f.products.size(), 0);
    f.probability.assign(f.candidate.size(), kNaN);
    f.fallback.assign(f.products.size(), 0);
    for (std::size_t i = 0; i < f.candidate.size(); ++i) f.candidate[i] = rca.values.data()[i] < 1.0 ? 1 : 0;
    return f;
}

} // namespace

ProgressionForecast density_forecast(const SpecializationMatrix& m_base, const RcaMatrix& rca_base,
                                     const RelatednessMatrix& rel, int horizon_years) {
    if (!rca_base.values.same_labels(m_base.m))
        throw ForgeError(ErrorKind::UniverseMismatch, "RCA and specialization matrices differ in labels");
    auto f = empty_forecast(rca_base, horizon_years);
    const auto d = density(m_base, rel);
    for (std::size_t i = 0; i < f.candidate.size(); ++i)
        if (f.candidate[i]) f.probability[i] = std::clamp(d.data()[i], 0.0, 1.0);
    return f;
}

ProgressionForecast predict_progression(const ProgressionModelSet& models, const SpecializationMatrix& m_base,
                                        const RcaMatrix& rca_base) {
    if (models.feature_products != rca_base.values.col_labels())
        throw ForgeError(ErrorKind::UniverseMismatch, "models were trained on a different product universe");
    if (!rca_base.values.same_labels(m_base.m))
        throw ForgeError(ErrorKind::UniverseMismatch, "RCA and specialization matrices differ in labels");

    auto f = empty_forecast(rca_base, models.params.horizon_years);
    const std::size_t nc = f.countries.size(), np = f.products.size();

    bool need_density = false;
    for (const auto& m : models.models) need_density |= m.status == ModelStatus::DensityFallback;
    Matrix dens;
    if (need_density) {
        const SpecializationMatrix history[] = {m_base};
        dens = density(m_base, cooccurrence_relatedness(history));
    }

    for (std::size_t p = 0; p < np; ++p) {
        const auto& model = models.models[p];
        f.fallback[p] = model.status == ModelStatus::DensityFallback ? 1 : 0;
        for (std::size_t c = 0; c < nc; ++c) {
            const auto i = c * np + p;
            if (!f.candidate[i]) continue;
            const auto features = rca_base.values.row(c);
            double prob = 0.0;
            if (model.status == ModelStatus::DensityFallback)
                prob = dens(c, p);
            else if (all_zero(features))
                prob = model.prior;
            else
                prob = model.ensemble.predict(features);
            f.probability[i] = std::clamp(prob, 0.0, 1.0);
        }
    }
    return f;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return kNaN;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

CountryProgressionStats country_progression_stats(const ProgressionForecast& forecast,
                                                  const std::set<std::string>& subset,
                                                  const std::set<std::string>& countries) {
    if (subset.empty()) throw ForgeError(ErrorKind::InvalidArgument, "progression subset is empty");
    std::vector<std::size_t> cols;
    for (std::size_t p = 0; p < forecast.products.size(); ++p)
        if (subset.count(forecast.products[p])) cols.push_back(p);

    CountryProgressionStats stats;
    double ref_sum = 0.0;
    std::size_t ref_n = 0;
    for (std::size_t c = 0; c < forecast.countries.size(); ++c) {
        const auto& code = forecast.countries[c];
        if (!countries.empty() && !countries.count(code)) continue;
        std::vector<double> probs;
        for (auto p : cols)
            if (forecast.is_candidate(c, p)) probs.push_back(forecast.at(c, p));
        if (probs.empty()) continue;
        std::sort(probs.begin(), probs.end());
        CountryProgressionRow row;
        row.country = code;
        row.candidates = probs.size();
        const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
        row.mean = sum / static_cast<double>(probs.size());
        row.min = probs.front();
        row.max = probs.back();
        row.q1 = quantile_sorted(probs, 0.25);
        row.median = quantile_sorted(probs, 0.5);
        row.q3 = quantile_sorted(probs, 0.75);
        ref_sum += sum;
        ref_n += probs.size();
        stats.rows.push_back(std::move(row));
    }
    std::sort(stats.rows.begin(), stats.rows.end(), [](const CountryProgressionRow& a, const CountryProgressionRow& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        return a.country < b.country;
    });
    for (std::size_t i = 0; i < stats.rows.size(); ++i) stats.rows[i].rank = static_cast<int>(i) + 1;
    stats.reference_mean = ref_n ? ref_sum / static_cast<double>(ref_n) : 0.0;
    return stats;
}

double roc_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size()) throw ForgeError(ErrorKind::InvalidArgument, "scores and labels differ in length");
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0, n_pos = 0.0, n_neg = 0.0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]]) {
                pos_rank_sum += avg_rank;
                n_pos += 1.0;
            } else {
                n_neg += 1.0;
            }
        }
        i = j + 1;
    }
    if (n_pos == 0.0 || n_neg == 0.0) throw ForgeError(ErrorKind::InvalidArgument, "AUC needs both classes");
    return (pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

void write_forecast_csv(std::ostream& out, const ProgressionForecast& f) {
    out << "# base_year: " << f.base_year << '\n' << "# horizon_years: " << f.horizon_years << '\n';
    out << "country,product,probability,candidate_flag\n";
    for (std::size_t c = 0; c < f.countries.size(); ++c)
        for (std::size_t p = 0; p < f.products.size(); ++p) {
            out << f.countries[c] << ',' << f.products[p] << ',';
            if (f.is_candidate(c, p)) out << csv::format_double(f.at(c, p));
            out << ',' << (f.is_candidate(c, p) ? 1 : 0) << '\n';
        }
}

ProgressionForecast read_forecast_csv(std::istream& in) {
    ProgressionForecast f;
    std::map<std::pair<std::string, std::string>, std::optional<double>> cells;
    std::vector<std::string> countries, products;
    std::set<std::string> seen_c, seen_p;
    std::string line;
    std::size_t n = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto t = csv::trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            auto colon = t.find(':');
            if (colon == std::string_view::npos) continue;
            auto key = csv::trim(t.substr(1, colon - 1));
            auto val = csv::parse_int(t.substr(colon + 1));
            if (key == "base_year" && val) f.base_year = static_cast<int>(*val);
            if (key == "horizon_years" && val) f.horizon_years = static_cast<int>(*val);
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        auto fields = csv::split_line(t);
        if (fields.size() != 4) throw ForgeError(ErrorKind::Parse, "forecast line " + std::to_string(n) + ": expected 4 fields", n);
        if (seen_c.insert(fields[0]).second) countries.push_back(fields[0]);
        if (seen_p.insert(fields[1]).second) products.push_back(fields[1]);
        std::optional<double> prob;
        if (fields[3] == "1") {
            prob = csv::parse_double(fields[2]);
            if (!prob) throw ForgeError(ErrorKind::Parse, "forecast line " + std::to_string(n) + ": bad probability", n);
        }
        cells[{fields[0], fields[1]}] = prob;
    }
    f.countries = countries;
    f.products = products;
    f.candidate.assign(countries.size() * products.size(), 0);
    f.probability.assign(f.candidate.size(), kNaN);
    f.fallback.assign(products.size(), 0);
    for (std::size_t c = 0; c < countries.size(); ++c)
        for (std::size_t p = 0; p < products.size(); ++p) {
            auto it = cells.find({countries[c], products[p]});
            if (it != cells.end() && it->second) {
                f.candidate[c * products.size() + p] = 1;
                f.probability[c * products.size() + p] = *it->second;
            }
        }
    return f;
}

void write_progression_stats_csv(std::ostream& out, const CountryProgressionStats& s) {
    out << "# reference_mean: " << csv::format_double(s.reference_mean) << '\n';
    out << "rank,country,candidates,mean,min,q1,median,q3,max\n";
    for (const auto& r : s.rows)
        out << r.rank << ',' << r.country << ',' << r.candidates << ',' << csv::format_double(r.mean) << ','
            << csv::format_double(r.min) << ',' << csv::format_double(r.q1) << ',' << csv::format_double(r.median)
            << ',' << csv::format_double(r.q3) << ',' << csv::format_double(r.max) << '\n';
}

} // namespace forge
