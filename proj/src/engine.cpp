// Copyright 2026 The selstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selstream/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "selstream/errors.hpp"

namespace selstream {

std::size_t SelectParams::buffer_size() const {
    return static_cast<std::size_t>(std::llround(buffer_ratio * static_cast<double>(window)));
}

std::size_t SelectParams::min_window() const {
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(min_window_ratio * static_cast<double>(window))));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double similarity_likelihood(double a, double mu, double sigma, double floor) {
    return std::max(floor, normal_cdf((a - mu) / sigma));
}

double selection_epsilon(double w0, double w1, double delta) {
    const double m = 2.0 / (1.0 / w0 + 1.0 / w1);
    return std::sqrt(std::log(2.0 / delta) / (2.0 * m));
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    // Rounding leaves a tiny variance on constant series; treat it as zero.
    const double nn = static_cast<double>(n);
    if (!(saa > 1e-20 * nn * std::max(1.0, ma * ma)) || !(sbb > 1e-20 * nn * std::max(1.0, mb * mb))) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

namespace {

struct State {
    int id = 0;
    HoeffdingTree tree;
    PredictionRing preds;
    ConceptRepresentation rep;
    std::deque<std::vector<double>> captures;  // recent incorporated fingerprints
    RunningStats sim;                          // similarity of `captures` to rep
    std::size_t sim_version = static_cast<std::size_t>(-1);
    Adwin history;
    std::deque<std::pair<std::size_t, double>> ring;  // (t, likelihood) for merging
    std::size_t train_count = 0;
    bool fresh = true;
    std::size_t grace_captures = 0;
    std::size_t last_capture = 0;  // B only: step of the last head capture
    int last_pred = 0;
    double similarity = 0.0;
    double likelihood = 0.0;
    double posterior = 0.0;

    State(std::size_t k, int classes, const SelectParams& p)
        : tree(k, classes, p.tree), preds(p.window + p.buffer_size()), history(p.state_estimator_risk) {}
};

}  // namespace

struct Engine::Impl {
    std::size_t k;
    int classes;
    SelectParams p;
    EngineMode mode;
    std::size_t dim;
    std::size_t min_window;

    BehaviourWindows windows;
    std::vector<std::unique_ptr<State>> repo;  // ascending id
    State* active = nullptr;
    std::unique_ptr<State> background;
    int next_id = 0;

    TransitionMatrices tm;
    Adwin detector;
    std::size_t drift_countdown = 0;

    Normalizer norm;
    std::vector<double> weights;
    bool weights_dirty = true;
    std::size_t weights_version = 0;
    std::map<std::pair<int, int>, ConceptRepresentation> foreign;  // (classifier, data) groups
    std::size_t since_capture = 0;

    std::vector<std::pair<int, double>> posteriors;
    std::vector<double> priors;
    std::vector<double> likelihoods;
    std::vector<StateScore> scores;
    std::vector<TransitionEvent> events;
    std::size_t merges = 0;
    std::size_t alerts = 0;

    // scratch
    std::vector<double> fp, na, nb;

    Impl(std::size_t k_, int classes_, const SelectParams& p_, EngineMode mode_)
        : k(k_),
          classes(classes_),
          p(p_),
          mode(mode_),
          dim(fingerprint_dimension(k_)),
          min_window(p_.min_window()),
          windows(k_, p_.window, p_.buffer_size()),
          detector(p_.drift_delta),
          norm(fingerprint_dimension(k_), p_.normalization) {
        validate();
        weights.assign(dim, 1.0);
        repo.push_back(make_state());
        active = repo.back().get();
        if (mode == EngineMode::select) background = make_background();
        since_capture = p.fingerprint_period;
    }

    void validate() const {
        if (k == 0) throw InputError("engine needs at least one feature");
        if (classes < 2) throw InputError("engine needs at least two classes");
        if (p.window < 3) throw InputError("window must be >= 3");
        if (min_window > p.window) throw InputError("min window exceeds window");
        if (p.fingerprint_period == 0 || p.merge_period == 0)
            throw InputError("periods must be > 0");
        if (!(p.hoeffding_risk > 0.0 && p.hoeffding_risk < 2.0)) throw InputError("hoeffding_risk must be in (0, 2)");
        if (!(p.sim_std_min > 0.0 && p.sim_std_max >= p.sim_std_min)) throw InputError("bad similarity std range");
        if (p.multihop_steps < 1) throw InputError("multihop_steps must be >= 1");
    }

    std::unique_ptr<State> make_state() {
        auto s = std::make_unique<State>(k, classes, p);
        s->id = next_id++;
        return s;
    }

    std::unique_ptr<State> make_background() {
        auto s = std::make_unique<State>(k, classes, p);
        s->id = Engine::kBackgroundId;
        s->last_capture = windows.now();
        s->likelihood = p.min_state_likelihood;
        return s;
    }

    bool in_grace(const State& s) const { return s.fresh && s.grace_captures < static_cast<std::size_t>(p.state_grace); }
    bool valid(const State& s) const { return s.rep.count() > 0 && s.captures.size() >= 2; }

    void remember(State& s, const std::vector<double>& f) {
        s.captures.push_back(f);
        if (s.captures.size() > p.similarity_history) s.captures.pop_front();
        s.sim_version = static_cast<std::size_t>(-1);
    }

    // Weights and scaling move as fingerprints arrive, so the similarity
    // distribution is re-measured under the current ones.
    void refresh_similarity_stats(State& s) {
        refresh_weights();
        if (s.sim_version == weights_version) return;
        s.sim.clear();
        for (const auto& f : s.captures) s.sim.add(similarity(s, f));
        s.sim_version = weights_version;
    }

    template <class F>
    void for_all(F&& f) {
        for (auto& s : repo) f(*s);
        if (background) f(*background);
    }

    State* find(int id) {
        for (auto& s : repo)
            if (s->id == id) return s.get();
        return nullptr;
    }

    double similarity(const State& s, const std::vector<double>& fingerprint) {
        na.resize(dim);
        nb.resize(dim);
        norm.apply(s.rep.mean(), na);
        norm.apply(fingerprint, nb);
        return weighted_cosine_similarity(na, nb, weights);
    }

    void refresh_weights() {
        if (!weights_dirty) return;
        weights_dirty = false;
        ++weights_version;
        std::vector<const ConceptRepresentation*> groups;
        for (const auto& s : repo)
            if (s->rep.count() > 0) groups.push_back(&s->rep);
        for (const auto& [key, rep] : foreign) groups.push_back(&rep);
        if (groups.empty()) {
            weights.assign(dim, 1.0);
            return;
        }
        weights = fisher_weights(groups, &norm);
    }

    void incorporate(ConceptRepresentation& rep, const std::vector<double>& f) {
        rep.add(f);
        norm.update(f);
        weights_dirty = true;
    }

    void capture_stable() {
        const TimeRange st = windows.stable();
        if (st.size() < min_window) return;
        if (since_capture++ < p.fingerprint_period) return;
        since_capture = 1;
        const SharedMeta shared = shared_meta(windows, st);
        assemble_fingerprint(shared, windows, active->preds, fp);
        incorporate(active->rep, fp);
        remember(*active, fp);
        if (active->fresh && ++active->grace_captures >= static_cast<std::size_t>(p.state_grace)) active->fresh = false;

        // Fingerprint every inactive classifier on the same data so the
        // weights see how a wrong classifier behaves and merging can check
        // whether one state's classifier fits another state's concept.
        for (auto& o : repo) {
            if (o.get() == active || o->preds.count() < st.size() || o->preds.first() > st.begin) continue;
            assemble_fingerprint(shared, windows, o->preds, fp);
            incorporate(foreign[{o->id, active->id}], fp);
        }
    }

    void capture_background() {
        State& b = *background;
        if (b.preds.count() < min_window) return;
        if (windows.now() - b.last_capture < p.fingerprint_period) return;
        b.last_capture = windows.now();
        const SharedMeta shared = shared_meta(windows, windows.recent(b.preds.count()));
        assemble_fingerprint(shared, windows, b.preds, fp);
        b.rep.add(fp);
        remember(b, fp);
    }

    /// With all = false only the active state is scored.
    void compute_likelihoods(bool all) {
        refresh_weights();
        const TimeRange head = windows.head();
        std::optional<SharedMeta> shared;
        for_all([&](State& s) {
            s.likelihood = p.min_state_likelihood;
            s.similarity = std::numeric_limits<double>::quiet_NaN();
            if (!valid(s)) return;
            if (!all && &s != active) return;
            // Every candidate is judged on the data since the last flush so
            // that older states are not penalised for pre-drift observations.
            const TimeRange r = windows.recent(std::min(s.preds.count(), windows.since_flush()));
            if (r.size() < min_window) return;
            if (r.size() == head.size()) {
                if (!shared) shared = shared_meta(windows, head);
                assemble_fingerprint(*shared, windows, s.preds, fp);
            } else {
                assemble_fingerprint(shared_meta(windows, r), windows, s.preds, fp);
            }
            refresh_similarity_stats(s);
            const double a = s.similarity = similarity(s, fp);
            const double sigma = std::clamp(s.sim.stddev(), p.sim_std_min, p.sim_std_max);
            s.likelihood = similarity_likelihood(a, s.sim.mean(), sigma, p.min_state_likelihood);
        });
    }

    void record_scores() {
        scores.clear();
        for_all([&](State& s) {
            scores.push_back({s.id, s.similarity, s.sim.mean(), std::clamp(s.sim.stddev(), p.sim_std_min, p.sim_std_max),
                              s.likelihood, s.posterior});
        });
    }

    void flush_after_change() {
        windows.flush();
        since_capture = p.fingerprint_period;
        detector.reset();
        if (mode == EngineMode::select) background = make_background();
    }

    StepResult step(const Observation& obs) {
        if (obs.x.size() != k) throw InputError("observation arity " + std::to_string(obs.x.size()) + " != " + std::to_string(k));
        if (obs.y < 0 || obs.y >= classes) throw InputError("label " + std::to_string(obs.y) + " out of range");
        const std::size_t t = windows.now();

        for_all([&](State& s) {
            s.last_pred = s.tree.predict(obs.x);
            s.preds.push(t, s.last_pred);
        });
        StepResult out;
        out.prediction = active->last_pred;
        out.active_state = active->id;

        windows.push(obs.x, obs.y);
        active->tree.learn_one(obs.x, obs.y);
        ++active->train_count;
        if (background) {
            background->tree.learn_one(obs.x, obs.y);
            ++background->train_count;
        }

        capture_stable();
        if (background) capture_background();

        // The detector watches the active state's likelihood; the other
        // likelihoods are needed every step only for continuous selection.
        const bool active_ready = valid(*active) && !in_grace(*active);
        compute_likelihoods(mode == EngineMode::select);
        const bool scored = !std::isnan(active->similarity);
        if (active_ready && scored && detector.add(active->likelihood).changed) {
            out.alert = true;
            ++alerts;
            drift_countdown = p.window;
            windows.flush();
            since_capture = p.fingerprint_period;
            if (mode == EngineMode::select) background = make_background();
        }
        out.drift = drift_countdown > 0;
        const int d = out.drift ? 1 : 0;

        if (mode == EngineMode::select) {
            select_step(t, d, out);
        } else {
            // Re-identification waits for one window of post-alert data so
            // that every candidate is judged on the new behaviour.
            const bool decide = drift_countdown == 1;
            if (decide) compute_likelihoods(true);
            sparse_step(t, decide, out);
        }
        if (drift_countdown > 0) --drift_countdown;

        if (mode == EngineMode::select && p.merging && (t + 1) % p.merge_period == 0) maybe_merge();
        return out;
    }

    void select_step(std::size_t t, int d, StepResult& out) {
        std::vector<int> ids;
        for (const auto& s : repo) ids.push_back(s->id);
        priors = compute_priors(tm, d, active->id, ids,
                                {p.min_prior, p.multihop_multiplier, p.multihop_steps, p.uniform_prior});
        double active_prior = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < repo.size(); ++i) {
            if (repo[i].get() == active) active_prior = priors[i];
            repo[i]->posterior = priors[i] * repo[i]->likelihood;
            total += repo[i]->posterior;
        }
        background->posterior = p.b_prior_multiplier * active_prior * background->likelihood;
        total += background->posterior;

        posteriors.clear();
        likelihoods.clear();
        for_all([&](State& s) {
            s.posterior /= total;
            posteriors.emplace_back(s.id, s.posterior);
            likelihoods.push_back(s.likelihood);
        });
        record_scores();

        // Nothing is learned from steps where the active state was not scored.
        const bool grace = in_grace(*active) || std::isnan(active->similarity);
        if (!grace) {
            for_all([&](State& s) {
                s.history.add(s.posterior);
                s.ring.emplace_back(t, s.likelihood);
                if (s.ring.size() > p.merge_history) s.ring.pop_front();
            });
        }

        State* next = active;
        TransitionEvent ev;
        ev.t = t;
        if (!grace) {
            if (p.map_selection) {
                for_all([&](State& s) {
                    if (s.posterior > next->posterior) next = &s;
                });
                ev.mu0 = active->posterior;
                ev.mu1 = next->posterior;
            } else {
                const double w0 = static_cast<double>(active->history.size());
                const double mu0 = active->history.mean();
                double best_mu = -1.0;
                for_all([&](State& s) {
                    if (&s == active || s.history.size() == 0) return;
                    const double mu1 = s.history.mean();
                    const double eps = selection_epsilon(w0, static_cast<double>(s.history.size()), p.hoeffding_risk);
                    if (mu1 - mu0 > eps && mu1 > best_mu) {
                        best_mu = mu1;
                        next = &s;
                        ev.mu0 = mu0;
                        ev.mu1 = mu1;
                        ev.epsilon = eps;
                    }
                });
            }
        }

        if (next == active) {
            tm.add(d, active->id, active->id);
            return;
        }
        ev.from = active->id;
        if (next == background.get()) {
            auto promoted = std::move(background);
            promoted->id = next_id++;
            promoted->fresh = true;
            promoted->grace_captures = 0;
            next = promoted.get();
            repo.push_back(std::move(promoted));
            tm.set(d, next->id, active->id, p.prev_state_prior);
            ev.promoted = true;
            weights_dirty = true;
        }
        tm.add(d, active->id, next->id);
        ev.to = next->id;
        active = next;
        events.push_back(ev);
        flush_after_change();
        out.transition = true;
    }

    void sparse_step(std::size_t t, bool decide, StepResult& out) {
        posteriors.clear();
        likelihoods.clear();
        double total = 0.0;
        for (const auto& s : repo) total += s->likelihood;
        for (const auto& s : repo) {
            s->posterior = s->likelihood / total;
            posteriors.emplace_back(s->id, s->posterior);
            likelihoods.push_back(s->likelihood);
        }
        record_scores();
        if (!decide) return;

        State* best = nullptr;
        for (const auto& s : repo)
            if (!best || s->likelihood > best->likelihood) best = s.get();
        State* next = best;
        bool created = false;
        if (best->likelihood < p.sparse_accept) {
            repo.push_back(make_state());
            next = repo.back().get();
            created = true;
        }
        if (next == active) return;
        TransitionEvent ev;
        ev.t = t;
        ev.from = active->id;
        ev.to = next->id;
        ev.promoted = created;
        ev.mu1 = best->likelihood;
        events.push_back(ev);
        active = next;
        flush_after_change();
        out.transition = true;
    }

    void maybe_merge() {
        bool merged = true;
        while (merged && repo.size() > 1) {
            merged = false;
            for (std::size_t i = 0; i < repo.size() && !merged; ++i) {
                for (std::size_t j = i + 1; j < repo.size() && !merged; ++j) {
                    const auto& ra = repo[i]->ring;
                    const auto& rb = repo[j]->ring;
                    std::vector<double> a, b;
                    auto ia = ra.begin(), ib = rb.begin();
                    while (ia != ra.end() && ib != rb.end()) {
                        if (ia->first < ib->first) ++ia;
                        else if (ib->first < ia->first) ++ib;
                        else {
                            a.push_back(ia->second);
                            b.push_back(ib->second);
                            ++ia;
                            ++ib;
                        }
                    }
                    if (same_behaviour(*repo[i], *repo[j])) {
                        merge(i, j);
                        merged = true;
                        continue;
                    }
                    if (a.size() < p.merge_min_overlap) continue;
                    if (pearson(a, b) > p.merge_correlation) {
                        merge(i, j);
                        merged = true;
                    }
                }
            }
        }
    }

    /// Two states describe the same concept when each representation falls
    /// within the other's usual similarity range and a classifier evaluated
    /// on the other state's data behaves as it does on its own.
    bool same_behaviour(State& a, State& b) {
        if (p.merge_similarity_margin < 0.0 || a.fresh || b.fresh || a.rep.count() == 0 || b.rep.count() == 0)
            return false;
        refresh_similarity_stats(a);
        refresh_similarity_stats(b);
        const auto floor = [&](const State& s) {
            return s.sim.mean() - p.merge_similarity_margin * std::clamp(s.sim.stddev(), p.sim_std_min, p.sim_std_max);
        };
        if (similarity(a, b.rep.mean()) < floor(a) || similarity(b, a.rep.mean()) < floor(b)) return false;
        int checked = 0;
        for (auto [x, y] : {std::pair<State*, State*>{&a, &b}, {&b, &a}}) {
            const auto it = foreign.find({x->id, y->id});
            if (it == foreign.end() || it->second.count() == 0) continue;
            if (similarity(*x, it->second.mean()) < floor(*x)) return false;
            ++checked;
        }
        return checked > 0;
    }

    void merge(std::size_t i, std::size_t j) {
        State* a = repo[i].get();
        State* b = repo[j].get();
        const bool keep_a = a->train_count > b->train_count || (a->train_count == b->train_count && a->id < b->id);
        State* keeper = keep_a ? a : b;
        State* loser = keep_a ? b : a;
        tm.merge(keeper->id, loser->id);
        std::erase_if(foreign, [&](const auto& kv) { return kv.first.first == loser->id || kv.first.second == loser->id; });
        const bool was_active = loser == active;
        const int loser_id = loser->id;
        if (was_active) active = keeper;
        std::erase_if(repo, [&](const auto& s) { return s->id == loser_id; });
        ++merges;
        weights_dirty = true;
        if (was_active) flush_after_change();
    }
};

Engine::Engine(std::size_t feature_count, int class_count, SelectParams params, EngineMode mode)
    : impl_(std::make_unique<Impl>(feature_count, class_count, params, mode)) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

StepResult Engine::step(const Observation& obs) { return impl_->step(obs); }
int Engine::active_id() const { return impl_->active->id; }
std::vector<int> Engine::repository_ids() const {
    std::vector<int> ids;
    for (const auto& s : impl_->repo) ids.push_back(s->id);
    return ids;
}
std::size_t Engine::repository_size() const { return impl_->repo.size(); }
const std::vector<std::pair<int, double>>& Engine::posteriors() const { return impl_->posteriors; }
const std::vector<double>& Engine::priors() const { return impl_->priors; }
const std::vector<double>& Engine::likelihoods() const { return impl_->likelihoods; }
const std::vector<StateScore>& Engine::scores() const { return impl_->scores; }
const TransitionMatrices& Engine::matrices() const { return impl_->tm; }
const std::vector<TransitionEvent>& Engine::transitions() const { return impl_->events; }
std::size_t Engine::merges() const { return impl_->merges; }
std::size_t Engine::alerts() const { return impl_->alerts; }
const SelectParams& Engine::params() const { return impl_->p; }
const ConceptRepresentation& Engine::active_representation() const { return impl_->active->rep; }
std::size_t Engine::active_captures() const { return impl_->active->rep.count(); }

}  // namespace selstream
