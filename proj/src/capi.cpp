// extern-C surface over the C++ core. Handles own copies of their inputs so
// every handle stays valid independently of the objects it was created from.
#include "bicm/bicm.h"

#include "errors.hpp"
#include "exponents.hpp"
#include "measures.hpp"
#include "simulate.hpp"

#include <cstring>
#include <optional>
#include <string>

struct bicm_constellation {
    bicm::Constellation c;
};

struct bicm_labeling {
    bicm::Labeling l;
};

struct bicm_channel {
    bicm::ChannelModel ch;
    double snr_db = 0.0;
};

struct bicm_engine {
    bicm::Engine e;
};

struct bicm_metric {
    bicm::Constellation c;
    std::optional<bicm::Labeling> l;
    std::unique_ptr<bicm::SymbolMetric> q;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <typename F>
bicm_status guarded(F&& body) {
    try {
        body();
        return BICM_OK;
    } catch (const bicm::UnsupportedError& e) {
        set_error(e.what());
        return BICM_EUNSUPPORTED;
    } catch (const bicm::IoError& e) {
        set_error(e.what());
        return BICM_EIO;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return BICM_EINVAL;
    } catch (const std::logic_error& e) {
        set_error(e.what());
        return BICM_ECONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return BICM_EINTERNAL;
    }
}

bicm_status require(bool ok, const char* what) {
    if (!ok) {
        set_error(what);
        return BICM_EINVAL;
    }
    return BICM_OK;
}

void fill_measure(const bicm::MeasureResult& r, bicm_measure_result* out) {
    out->value_bits = r.value;
    out->std_error = r.std_error;
    out->has_s_opt = r.s_opt.has_value() ? 1 : 0;
    out->s_opt = r.s_opt.value_or(0.0);
    out->is_pseudo = r.pseudo ? 1 : 0;
    out->converged = r.converged ? 1 : 0;
    out->n_per_bit = 0;
    if (r.per_bit) {
        const int n = std::min<int>(BICM_MAX_BITS, static_cast<int>(r.per_bit->size()));
        out->n_per_bit = n;
        for (int i = 0; i < n; ++i) out->per_bit[i] = (*r.per_bit)[i];
    }
}

void fill_point(const bicm::ExponentPoint& p, bicm_exponent_point* out) {
    out->rate_bits = p.rate_bits;
    out->er_nats = p.er_nats;
    out->rho_opt = p.rho_opt;
    out->s_opt = p.s_opt;
    out->std_error = p.std_error;
    out->converged = p.converged ? 1 : 0;
}

bicm::Constellation make_named_constellation(const std::string& name) {
    if (name == "bpsk" || name == "psk2") return bicm::build_psk(2);
    if (name == "psk4") return bicm::build_psk(4);
    if (name == "psk8") return bicm::build_psk(8);
    if (name == "psk16") return bicm::build_psk(16);
    if (name == "qpsk" || name == "qam4") return bicm::build_qam(4);
    if (name == "qam16") return bicm::build_qam(16);
    if (name == "qam64") return bicm::build_qam(64);
    throw std::invalid_argument("unknown constellation name: " + name);
}

} // namespace

extern "C" {

const char* bicm_version(void) { return BICM_VERSION; }

const char* bicm_strerror(bicm_status status) {
    switch (status) {
        case BICM_OK: return "ok";
        case BICM_EINVAL: return "invalid argument";
        case BICM_EUNSUPPORTED: return "unsupported";
        case BICM_ECONFIG: return "not configured";
        case BICM_EIO: return "io error";
        case BICM_EINTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* bicm_last_error(void) { return g_last_error.c_str(); }

bicm_status bicm_constellation_create(const char* name, bicm_constellation** out) {
    if (auto st = require(name && out, "constellation_create: null argument")) return st;
    return guarded([&] { *out = new bicm_constellation{make_named_constellation(name)}; });
}

bicm_status bicm_constellation_create_psk(int M, bicm_constellation** out) {
    if (auto st = require(out != nullptr, "constellation_create_psk: null output")) return st;
    return guarded([&] { *out = new bicm_constellation{bicm::build_psk(M)}; });
}

bicm_status bicm_constellation_create_qam(int M, bicm_constellation** out) {
    if (auto st = require(out != nullptr, "constellation_create_qam: null output")) return st;
    return guarded([&] { *out = new bicm_constellation{bicm::build_qam(M)}; });
}

bicm_status bicm_constellation_load(const char* path, bicm_constellation** out_c,
                                    bicm_labeling** out_l, double* out_scale) {
    if (auto st = require(path && out_c && out_l, "constellation_load: null argument")) return st;
    return guarded([&] {
        bicm::LoadedConstellation loaded = bicm::load_constellation_file(path);
        *out_c = new bicm_constellation{std::move(loaded.constellation)};
        *out_l = new bicm_labeling{std::move(loaded.labeling)};
        if (out_scale) *out_scale = loaded.scale;
    });
}

void bicm_constellation_free(bicm_constellation* c) { delete c; }

int bicm_constellation_bits(const bicm_constellation* c) { return c ? c->c.m : 0; }

int bicm_constellation_size(const bicm_constellation* c) { return c ? c->c.size() : 0; }

const char* bicm_constellation_name(const bicm_constellation* c) {
    return c ? c->c.name.c_str() : "";
}

bicm_status bicm_constellation_point(const bicm_constellation* c, int index, double* re,
                                     double* im) {
    if (auto st = require(c && re && im, "constellation_point: null argument")) return st;
    if (auto st = require(index >= 0 && index < c->c.size(), "constellation_point: index out of range"))
        return st;
    *re = c->c.points[index].real();
    *im = c->c.points[index].imag();
    return BICM_OK;
}

bicm_status bicm_labeling_brgc(const bicm_constellation* c, bicm_labeling** out) {
    if (auto st = require(c && out, "labeling_brgc: null argument")) return st;
    return guarded([&] { *out = new bicm_labeling{bicm::brgc(c->c)}; });
}

bicm_status bicm_labeling_create(int m, const int* point_of_label, bicm_labeling** out) {
    if (auto st = require(point_of_label && out, "labeling_create: null argument")) return st;
    return guarded([&] {
        if (m < 1 || m > 16) throw std::invalid_argument("labeling_create: m out of range");
        std::vector<std::int32_t> map(point_of_label, point_of_label + (1 << m));
        *out = new bicm_labeling{bicm::Labeling(m, std::move(map))};
    });
}

void bicm_labeling_free(bicm_labeling* l) { delete l; }

int bicm_labeling_bit(const bicm_labeling* l, int point_index, int j) {
    if (!l || j < 1 || j > l->l.bits() || point_index < 0 || point_index >= (1 << l->l.bits()))
        return -1;
    return l->l.bit_of_point(point_index, j);
}

bicm_status bicm_labeling_subset(const bicm_labeling* l, int j, int b, int* out_indices,
                                 int cap, int* out_count) {
    if (auto st = require(l && out_indices && out_count, "labeling_subset: null argument"))
        return st;
    return guarded([&] {
        const auto& sub = l->l.subset(j, b);
        if (cap < static_cast<int>(sub.size()))
            throw std::invalid_argument("labeling_subset: capacity too small");
        for (std::size_t i = 0; i < sub.size(); ++i) out_indices[i] = sub[i];
        *out_count = static_cast<int>(sub.size());
    });
}

bicm_status bicm_channel_create(const char* kind, double snr_db, bicm_channel** out) {
    if (auto st = require(kind && out, "channel_create: null argument")) return st;
    return guarded([&] {
        bicm::ChannelModel ch(bicm::channel_kind_from_name(kind), bicm::snr_db_to_linear(snr_db));
        *out = new bicm_channel{ch, snr_db};
    });
}

void bicm_channel_free(bicm_channel* ch) { delete ch; }

double bicm_channel_snr_db(const bicm_channel* ch) { return ch ? ch->snr_db : 0.0; }

const char* bicm_channel_kind(const bicm_channel* ch) {
    return ch ? bicm::channel_kind_name(ch->ch.kind) : "";
}

bicm_status bicm_channel_log_density(const bicm_channel* ch, double y_re, double y_im,
                                     double h_re, double h_im, double x_re, double x_im,
                                     double* out) {
    if (auto st = require(ch && out, "channel_log_density: null argument")) return st;
    const bicm::Observation obs{{y_re, y_im}, {h_re, h_im}};
    *out = bicm::log_transition_density(ch->ch, obs, {x_re, x_im});
    return BICM_OK;
}

bicm_status bicm_engine_create_mc(long samples, unsigned long long seed, bicm_engine** out) {
    if (auto st = require(out != nullptr, "engine_create_mc: null output")) return st;
    return guarded([&] {
        bicm::EngineConfig cfg;
        cfg.backend = bicm::Backend::monte_carlo;
        cfg.samples = samples;
        cfg.seed = seed;
        *out = new bicm_engine{bicm::Engine(cfg)};
    });
}

bicm_status bicm_engine_create_gh(int nodes_per_axis, unsigned long long seed,
                                  bicm_engine** out) {
    if (auto st = require(out != nullptr, "engine_create_gh: null output")) return st;
    return guarded([&] {
        bicm::EngineConfig cfg;
        cfg.backend = bicm::Backend::gauss_hermite;
        cfg.nodes_per_axis = nodes_per_axis;
        cfg.seed = seed;
        *out = new bicm_engine{bicm::Engine(cfg)};
    });
}

void bicm_engine_free(bicm_engine* e) { delete e; }

bicm_status bicm_metric_create_extrinsic(const char* kind, const bicm_constellation* c,
                                         const bicm_labeling* l, const char* ext_model,
                                         double sigma, bicm_metric** out) {
    if (auto st = require(kind && c && out, "metric_create: null argument")) return st;
    return guarded([&] {
        const bicm::MetricKind mk = bicm::metric_kind_from_name(kind);
        bicm::ExtrinsicModel model;
        if (ext_model) {
            model.kind = bicm::extrinsic_kind_from_name(ext_model);
            model.sigma = sigma;
            if (model.kind == bicm::ExtrinsicKind::gaussian_llr && sigma < 0.0)
                throw std::invalid_argument("metric: sigma must be >= 0");
        }
        auto handle = std::make_unique<bicm_metric>();
        handle->c = c->c;
        if (l != nullptr) handle->l.emplace(l->l);
        handle->q = bicm::make_metric(mk, handle->c, handle->l ? &*handle->l : nullptr, model);
        *out = handle.release();
    });
}

bicm_status bicm_metric_create(const char* kind, const bicm_constellation* c,
                               const bicm_labeling* l, bicm_metric** out) {
    return bicm_metric_create_extrinsic(kind, c, l, nullptr, 0.0, out);
}

void bicm_metric_free(bicm_metric* q) { delete q; }

const char* bicm_metric_kind(const bicm_metric* q) {
    return q ? bicm::metric_kind_name(q->q->kind()) : "";
}

bicm_status bicm_metric_llr(const bicm_metric* q, const bicm_channel* ch, int j, double y_re,
                            double y_im, double h_re, double h_im, double* out) {
    if (auto st = require(q && ch && out, "metric_llr: null argument")) return st;
    return guarded([&] {
        const bicm::Observation obs{{y_re, y_im}, {h_re, h_im}};
        *out = bicm::llr(*q->q, ch->ch, j, obs);
    });
}

bicm_status bicm_cm_capacity(const bicm_channel* ch, const bicm_constellation* c,
                             bicm_engine* e, bicm_measure_result* out) {
    if (auto st = require(ch && c && e && out, "cm_capacity: null argument")) return st;
    return guarded([&] { fill_measure(bicm::cm_capacity(ch->ch, c->c, e->e), out); });
}

bicm_status bicm_bicm_capacity(const bicm_channel* ch, const bicm_constellation* c,
                               const bicm_labeling* l, bicm_engine* e,
                               bicm_measure_result* out) {
    if (auto st = require(ch && c && l && e && out, "bicm_capacity: null argument")) return st;
    return guarded([&] { fill_measure(bicm::bicm_capacity(ch->ch, c->c, l->l, e->e), out); });
}

bicm_status bicm_gmi_at_s(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                          double s, bicm_measure_result* out) {
    if (auto st = require(q && ch && e && out, "gmi_at_s: null argument")) return st;
    return guarded([&] { fill_measure(bicm::gmi_at_s(*q->q, ch->ch, e->e, s), out); });
}

bicm_status bicm_gmi(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                     bicm_measure_result* out) {
    if (auto st = require(q && ch && e && out, "gmi: null argument")) return st;
    return guarded([&] { fill_measure(bicm::gmi(*q->q, ch->ch, e->e), out); });
}

bicm_status bicm_gmi_per_bit(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                             double s, bicm_measure_result* out) {
    if (auto st = require(q && ch && e && out, "gmi_per_bit: null argument")) return st;
    return guarded([&] { fill_measure(bicm::gmi_per_bit(*q->q, ch->ch, e->e, s), out); });
}

bicm_status bicm_pseudo_gmi(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                            bicm_measure_result* out) {
    if (auto st = require(q && ch && e && out, "pseudo_gmi: null argument")) return st;
    return guarded([&] { fill_measure(bicm::pseudo_gmi_extrinsic_tx(*q->q, ch->ch, e->e), out); });
}

bicm_status bicm_e0_cm(const bicm_channel* ch, const bicm_constellation* c, bicm_engine* e,
                       double rho, bicm_estimate* out) {
    if (auto st = require(ch && c && e && out, "e0_cm: null argument")) return st;
    return guarded([&] {
        const bicm::Estimate est = bicm::e0_cm(ch->ch, c->c, e->e, rho);
        out->value = est.mean;
        out->std_error = est.std_error;
    });
}

bicm_status bicm_e0_q(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e, double rho,
                      double s, bicm_estimate* out) {
    if (auto st = require(q && ch && e && out, "e0_q: null argument")) return st;
    return guarded([&] {
        const bicm::Estimate est = bicm::e0_q(*q->q, ch->ch, e->e, rho, s);
        out->value = est.mean;
        out->std_error = est.std_error;
    });
}

bicm_status bicm_e0_ind(const bicm_channel* ch, const bicm_constellation* c,
                        const bicm_labeling* l, bicm_engine* e, double rho,
                        bicm_estimate* out) {
    if (auto st = require(ch && c && l && e && out, "e0_ind: null argument")) return st;
    return guarded([&] {
        const bicm::Estimate est = bicm::e0_ind(ch->ch, c->c, l->l, e->e, rho);
        out->value = est.mean;
        out->std_error = est.std_error;
    });
}

bicm_status bicm_exponent_cm(const bicm_channel* ch, const bicm_constellation* c,
                             bicm_engine* e, double rate_bits, bicm_exponent_point* out) {
    if (auto st = require(ch && c && e && out, "exponent_cm: null argument")) return st;
    return guarded([&] {
        bicm::GallagerFamily family{bicm::GallagerFamily::Kind::cm};
        fill_point(bicm::random_coding_exponent(family, ch->ch, c->c, nullptr, e->e, rate_bits),
                   out);
    });
}

bicm_status bicm_exponent_ind(const bicm_channel* ch, const bicm_constellation* c,
                              const bicm_labeling* l, bicm_engine* e, double rate_bits,
                              bicm_exponent_point* out) {
    if (auto st = require(ch && c && l && e && out, "exponent_ind: null argument")) return st;
    return guarded([&] {
        bicm::GallagerFamily family{bicm::GallagerFamily::Kind::ind};
        fill_point(bicm::random_coding_exponent(family, ch->ch, c->c, &l->l, e->e, rate_bits),
                   out);
    });
}

bicm_status bicm_exponent_q(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                            const char* s_mode, double s_fixed, double rate_bits,
                            bicm_exponent_point* out) {
    if (auto st = require(q && ch && e && out && s_mode, "exponent_q: null argument")) return st;
    return guarded([&] {
        bicm::GallagerFamily family{bicm::GallagerFamily::Kind::q, q->q.get()};
        const std::string mode(s_mode);
        if (mode == "optimize")
            family.s_mode = bicm::SMode::optimize;
        else if (mode == "coupled")
            family.s_mode = bicm::SMode::coupled;
        else if (mode == "fixed") {
            family.s_mode = bicm::SMode::fixed;
            family.s_fixed = s_fixed;
        } else
            throw std::invalid_argument("exponent_q: s_mode must be optimize|coupled|fixed");
        fill_point(bicm::random_coding_exponent(family, ch->ch, q->c,
                                                q->l ? &*q->l : nullptr, e->e, rate_bits),
                   out);
    });
}

bicm_status bicm_cutoff(const bicm_metric* q, const bicm_channel* ch,
                        const bicm_labeling* l, bicm_engine* e, bicm_cutoff_result* out) {
    if (auto st = require(q && ch && e && out, "cutoff: null argument")) return st;
    return guarded([&] {
        const bicm::Labeling* lab = l ? &l->l : (q->l ? &*q->l : nullptr);
        if (lab == nullptr) throw std::invalid_argument("cutoff: labeling required");
        const bicm::CutoffRates r = bicm::cutoff_rates(ch->ch, q->c, *lab, *q->q, e->e);
        out->r0_cm = r.r0_cm.mean;
        out->r0_cm_se = r.r0_cm.std_error;
        out->r0_q = r.r0_q.mean;
        out->r0_q_se = r.r0_q.std_error;
        out->r0_q_s_opt = r.r0_q_s_opt;
        out->r0_ind = r.r0_ind.mean;
        out->r0_ind_se = r.r0_ind.std_error;
        out->r0_av = r.r0_av.mean;
        out->r0_av_se = r.r0_av.std_error;
    });
}

bicm_status bicm_validate(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                          int block_length, double rate_bits, long trials,
                          unsigned long long seed, bicm_validate_result* out) {
    if (auto st = require(q && ch && e && out, "validate: null argument")) return st;
    return guarded([&] {
        bicm::RandomCodeExperiment exp;
        exp.block_length = block_length;
        exp.rate_bits = rate_bits;
        exp.trials = trials;
        exp.metric = q->q.get();
        exp.seed = seed;
        const bicm::ValidationResult r = bicm::run_random_code_experiment(exp, ch->ch, e->e);
        out->pe_hat = r.pe_hat;
        out->ci_halfwidth = r.ci_halfwidth;
        out->bound = r.bound;
        out->rho_opt = r.rho_opt;
        out->s_opt = r.s_opt;
        out->errors = r.errors;
        out->trials = r.trials;
        out->num_messages = r.num_messages;
    });
}

} // extern "C"
