/*
 * bicm: channel capacities, generalized mutual information, Gallager error
 * exponents and cutoff rates for coded modulation and BICM under matched and
 * mismatched decoding metrics.
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * plain-old-data results. All handles are created by bicm_* constructors and
 * released with the matching *_free call. Functions returning bicm_status
 * leave outputs untouched on failure; a thread-local message describing the
 * last failure is available through bicm_last_error().
 */
#ifndef BICM_BICM_H
#define BICM_BICM_H

#ifdef __cplusplus
extern "C" {
#endif

#define BICM_VERSION "0.1.0"

typedef enum bicm_status {
    BICM_OK = 0,
    BICM_EINVAL = 1,      /* invalid argument / precondition violated */
    BICM_EUNSUPPORTED = 2,/* combination outside implemented scope */
    BICM_ECONFIG = 3,     /* object not configured for the operation */
    BICM_EIO = 4,         /* file not found / parse failure */
    BICM_EINTERNAL = 5
} bicm_status;

const char* bicm_version(void);
const char* bicm_strerror(bicm_status status);
const char* bicm_last_error(void);

typedef struct bicm_constellation bicm_constellation;
typedef struct bicm_labeling bicm_labeling;
typedef struct bicm_channel bicm_channel;
typedef struct bicm_engine bicm_engine;
typedef struct bicm_metric bicm_metric;

/* --- constellations and labelings -------------------------------------- */

/* name: bpsk | qpsk | psk4 | psk8 | psk16 | qam16 | qam64 */
bicm_status bicm_constellation_create(const char* name, bicm_constellation** out);
bicm_status bicm_constellation_create_psk(int M, bicm_constellation** out);
bicm_status bicm_constellation_create_qam(int M, bicm_constellation** out);
/* Text file, one `<bitstring> <re> <im>` line per symbol; points are
 * renormalized to unit average energy and the applied scale is reported. */
bicm_status bicm_constellation_load(const char* path, bicm_constellation** out_c,
                                    bicm_labeling** out_l, double* out_scale);
void bicm_constellation_free(bicm_constellation* c);

int bicm_constellation_bits(const bicm_constellation* c);  /* m */
int bicm_constellation_size(const bicm_constellation* c);  /* 2^m */
bicm_status bicm_constellation_point(const bicm_constellation* c, int index, double* re,
                                     double* im);
const char* bicm_constellation_name(const bicm_constellation* c);

/* Binary reflected Gray labeling matched to the constellation geometry. */
bicm_status bicm_labeling_brgc(const bicm_constellation* c, bicm_labeling** out);
/* Arbitrary labeling: point_of_label[label] = point index, 2^m entries
 * forming a bijection. */
bicm_status bicm_labeling_create(int m, const int* point_of_label, bicm_labeling** out);
void bicm_labeling_free(bicm_labeling* l);
/* Bit j (1-based, MSB first) of a point's label. */
int bicm_labeling_bit(const bicm_labeling* l, int point_index, int j);
/* Fills out_indices (capacity cap) with X_b^j; count = 2^(m-1). */
bicm_status bicm_labeling_subset(const bicm_labeling* l, int j, int b, int* out_indices,
                                 int cap, int* out_count);

/* --- channel ------------------------------------------------------------ */

/* kind: awgn | rayleigh (fully interleaved, perfect CSI at the receiver) */
bicm_status bicm_channel_create(const char* kind, double snr_db, bicm_channel** out);
void bicm_channel_free(bicm_channel* ch);
double bicm_channel_snr_db(const bicm_channel* ch);
const char* bicm_channel_kind(const bicm_channel* ch);
/* log p(y|x,h) = -log(pi) - |y - h sqrt(snr) x|^2 */
bicm_status bicm_channel_log_density(const bicm_channel* ch, double y_re, double y_im,
                                     double h_re, double h_im, double x_re, double x_im,
                                     double* out);

/* --- expectation engine -------------------------------------------------- */

bicm_status bicm_engine_create_mc(long samples, unsigned long long seed, bicm_engine** out);
/* Gauss-Hermite backend (AWGN only). */
bicm_status bicm_engine_create_gh(int nodes_per_axis, unsigned long long seed,
                                  bicm_engine** out);
void bicm_engine_free(bicm_engine* e);

/* --- decoding metrics ----------------------------------------------------
 * kind: matched | sum | maxlog | ext-tx | ext-hyp
 * ext_model: none | perfect | gaussian (sigma = per-bit LLR std deviation)
 * Non-extrinsic kinds ignore ext_model/sigma. `matched` ignores the
 * labeling; all other kinds require one. */
bicm_status bicm_metric_create(const char* kind, const bicm_constellation* c,
                               const bicm_labeling* l, bicm_metric** out);
bicm_status bicm_metric_create_extrinsic(const char* kind, const bicm_constellation* c,
                                         const bicm_labeling* l, const char* ext_model,
                                         double sigma, bicm_metric** out);
void bicm_metric_free(bicm_metric* q);
const char* bicm_metric_kind(const bicm_metric* q);

/* Bit log-metric ratio log q_j(1,y)/q_j(0,y) (sum and maxlog kinds). */
bicm_status bicm_metric_llr(const bicm_metric* q, const bicm_channel* ch, int j, double y_re,
                            double y_im, double h_re, double h_im, double* out);

/* --- information measures ------------------------------------------------ */

#define BICM_MAX_BITS 16

typedef struct bicm_measure_result {
    double value_bits;
    double std_error;  /* bits; 0 for the quadrature backend */
    double s_opt;      /* meaningful when has_s_opt != 0 */
    int has_s_opt;
    int is_pseudo;     /* 1: expectation lacks achievable-rate meaning */
    int converged;     /* 0: optimizer stopped early, value is best found */
    int n_per_bit;     /* 0 when no decomposition was computed */
    double per_bit[BICM_MAX_BITS];
} bicm_measure_result;

bicm_status bicm_cm_capacity(const bicm_channel* ch, const bicm_constellation* c,
                             bicm_engine* e, bicm_measure_result* out);
bicm_status bicm_bicm_capacity(const bicm_channel* ch, const bicm_constellation* c,
                               const bicm_labeling* l, bicm_engine* e,
                               bicm_measure_result* out);
bicm_status bicm_gmi_at_s(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                          double s, bicm_measure_result* out);
bicm_status bicm_gmi(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                     bicm_measure_result* out);
bicm_status bicm_gmi_per_bit(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                             double s, bicm_measure_result* out);
bicm_status bicm_pseudo_gmi(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                            bicm_measure_result* out);

/* --- error exponents ------------------------------------------------------ */

typedef struct bicm_estimate {
    double value;      /* nats */
    double std_error;  /* nats */
} bicm_estimate;

bicm_status bicm_e0_cm(const bicm_channel* ch, const bicm_constellation* c, bicm_engine* e,
                       double rho, bicm_estimate* out);
bicm_status bicm_e0_q(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e, double rho,
                      double s, bicm_estimate* out);
bicm_status bicm_e0_ind(const bicm_channel* ch, const bicm_constellation* c,
                        const bicm_labeling* l, bicm_engine* e, double rho,
                        bicm_estimate* out);

typedef struct bicm_exponent_point {
    double rate_bits;
    double er_nats;
    double rho_opt;
    double s_opt;
    double std_error;
    int converged;
} bicm_exponent_point;

bicm_status bicm_exponent_cm(const bicm_channel* ch, const bicm_constellation* c,
                             bicm_engine* e, double rate_bits, bicm_exponent_point* out);
bicm_status bicm_exponent_ind(const bicm_channel* ch, const bicm_constellation* c,
                              const bicm_labeling* l, bicm_engine* e, double rate_bits,
                              bicm_exponent_point* out);
/* s_mode: optimize | coupled | fixed (s_fixed used for "fixed" only). */
bicm_status bicm_exponent_q(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                            const char* s_mode, double s_fixed, double rate_bits,
                            bicm_exponent_point* out);

typedef struct bicm_cutoff_result {
    double r0_cm, r0_cm_se;       /* nats */
    double r0_q, r0_q_se, r0_q_s_opt;
    double r0_ind, r0_ind_se;
    double r0_av, r0_av_se;
} bicm_cutoff_result;

/* R0 family at rho=1; the generalized cutoff rate uses the given metric. */
bicm_status bicm_cutoff(const bicm_metric* q, const bicm_channel* ch,
                        const bicm_labeling* l, bicm_engine* e, bicm_cutoff_result* out);

/* --- random-coding validation --------------------------------------------- */

typedef struct bicm_validate_result {
    double pe_hat;
    double ci_halfwidth; /* Wilson 95% */
    double bound;        /* exp(-N E_r(R)) */
    double rho_opt;
    double s_opt;
    long errors;
    long trials;
    long num_messages;
} bicm_validate_result;

bicm_status bicm_validate(const bicm_metric* q, const bicm_channel* ch, bicm_engine* e,
                          int block_length, double rate_bits, long trials,
                          unsigned long long seed, bicm_validate_result* out);

#ifdef __cplusplus
}
#endif

#endif /* BICM_BICM_H */
