// Command-line front end: capacity/gmi/exponent/cutoff/validate sweeps with
// self-describing CSV output. Talks to the library exclusively through the
// shared C API.
#include "runspec.hpp"

#include <bicm/bicm.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using bicm_cli::format_double;
using bicm_cli::RunSpec;

constexpr double ln2 = 0.69314718055994530942;

struct CliError : std::runtime_error {
    int exit_code;
    CliError(const std::string& what, int code) : std::runtime_error(what), exit_code(code) {}
};

void check(bicm_status status) {
    if (status == BICM_OK) return;
    const int code = (status == BICM_EINVAL) ? 2 : 1;
    throw CliError(std::string(bicm_strerror(status)) + ": " + bicm_last_error(), code);
}

template <typename T, void (*FreeFn)(T*)>
struct HandleDeleter {
    void operator()(T* p) const { FreeFn(p); }
};
using ConstellationPtr =
    std::unique_ptr<bicm_constellation, HandleDeleter<bicm_constellation, bicm_constellation_free>>;
using LabelingPtr = std::unique_ptr<bicm_labeling, HandleDeleter<bicm_labeling, bicm_labeling_free>>;
using ChannelPtr = std::unique_ptr<bicm_channel, HandleDeleter<bicm_channel, bicm_channel_free>>;
using EnginePtr = std::unique_ptr<bicm_engine, HandleDeleter<bicm_engine, bicm_engine_free>>;
using MetricPtr = std::unique_ptr<bicm_metric, HandleDeleter<bicm_metric, bicm_metric_free>>;

struct Workspace {
    ConstellationPtr constellation;
    LabelingPtr labeling;
    EnginePtr engine;
};

Workspace open_workspace(const RunSpec& spec) {
    Workspace ws;
    bicm_constellation* c = nullptr;
    bicm_labeling* l = nullptr;
    if (spec.constellation.rfind("file:", 0) == 0) {
        const std::string path = spec.constellation.substr(5);
        double scale = 1.0;
        check(bicm_constellation_load(path.c_str(), &c, &l, &scale));
        std::fprintf(stderr, "note: %s renormalized to unit energy (scale factor %s)\n",
                     path.c_str(), format_double(scale).c_str());
        ws.constellation.reset(c);
        ws.labeling.reset(l);
        if (spec.labeling != "file" && spec.labeling != "brgc")
            throw CliError("file constellations carry their own labeling", 2);
    } else {
        check(bicm_constellation_create(spec.constellation.c_str(), &c));
        ws.constellation.reset(c);
        if (spec.labeling == "brgc") {
            check(bicm_labeling_brgc(c, &l));
            ws.labeling.reset(l);
        } else if (spec.labeling.rfind("file:", 0) == 0) {
            // Labeling supplied by file: its normalized points are matched to
            // the built-in constellation geometrically, so the file's row
            // order does not need to follow the internal point indexing.
            const std::string path = spec.labeling.substr(5);
            bicm_constellation* cf = nullptr;
            bicm_labeling* lf = nullptr;
            double scale = 1.0;
            check(bicm_constellation_load(path.c_str(), &cf, &lf, &scale));
            ConstellationPtr file_c(cf);
            LabelingPtr file_l(lf);
            const int m = bicm_constellation_bits(c);
            if (bicm_constellation_bits(cf) != m)
                throw CliError("labeling file does not match the constellation size", 2);
            const int M = bicm_constellation_size(c);
            std::vector<int> match(M, -1); // file point -> constellation point
            std::vector<bool> taken(M, false);
            for (int fp = 0; fp < M; ++fp) {
                double fre = 0, fim = 0;
                check(bicm_constellation_point(cf, fp, &fre, &fim));
                for (int p = 0; p < M; ++p) {
                    double re = 0, im = 0;
                    check(bicm_constellation_point(c, p, &re, &im));
                    const double d2 = (re - fre) * (re - fre) + (im - fim) * (im - fim);
                    if (d2 < 1e-12 && !taken[p]) {
                        match[fp] = p;
                        taken[p] = true;
                        break;
                    }
                }
                if (match[fp] < 0)
                    throw CliError("labeling file points do not match the constellation " +
                                       spec.constellation,
                                   2);
            }
            std::vector<int> point_of_label(M);
            for (int label = 0; label < M; ++label) {
                // Recover the file's label->row map from the per-point bits.
                int row = -1;
                for (int fp = 0; fp < M; ++fp) {
                    int value = 0;
                    for (int j = 1; j <= m; ++j)
                        value = (value << 1) | bicm_labeling_bit(lf, fp, j);
                    if (value == label) {
                        row = fp;
                        break;
                    }
                }
                point_of_label[label] = match[row];
            }
            check(bicm_labeling_create(m, point_of_label.data(), &l));
            ws.labeling.reset(l);
        } else {
            throw CliError("unknown labeling: " + spec.labeling, 2);
        }
    }
    bicm_engine* e = nullptr;
    if (spec.backend == "mc") check(bicm_engine_create_mc(spec.samples, spec.seed, &e));
    else if (spec.backend == "gh") check(bicm_engine_create_gh(spec.gh_nodes, spec.seed, &e));
    else throw CliError("unknown backend: " + spec.backend, 2);
    ws.engine.reset(e);
    return ws;
}

ChannelPtr open_channel(const RunSpec& spec, double snr_db) {
    bicm_channel* ch = nullptr;
    check(bicm_channel_create(spec.channel.c_str(), snr_db, &ch));
    return ChannelPtr(ch);
}

MetricPtr open_metric(const RunSpec& spec, const std::string& name, const Workspace& ws) {
    bicm_metric* q = nullptr;
    if (name == "ext-tx" || name == "ext-hyp")
        check(bicm_metric_create_extrinsic(name.c_str(), ws.constellation.get(),
                                           ws.labeling.get(), spec.ext_model.c_str(),
                                           spec.ext_sigma, &q));
    else
        check(bicm_metric_create(name.c_str(), ws.constellation.get(), ws.labeling.get(), &q));
    return MetricPtr(q);
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) {
        if (path.empty()) {
            file_ = stdout;
            owned_ = false;
        } else {
            file_ = std::fopen(path.c_str(), "wb");
            if (!file_) throw CliError("cannot open output file: " + path, 1);
            owned_ = true;
        }
    }
    ~CsvWriter() {
        if (owned_ && file_) std::fclose(file_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const RunSpec& spec) {
        std::fprintf(file_, "# version=%s\n", BICM_VERSION);
        for (const auto& [key, value] : bicm_cli::serialize(spec))
            std::fprintf(file_, "# %s=%s\n", key.c_str(), value.c_str());
    }
    void line(const std::string& text) { std::fprintf(file_, "%s\n", text.c_str()); }

private:
    std::FILE* file_ = nullptr;
    bool owned_ = false;
};

std::string measure_row(const RunSpec& spec, const std::string& measure, double snr_db,
                        const bicm_measure_result& r) {
    if (!r.converged)
        std::fprintf(stderr, "warning: %s at %s dB: s-search did not converge, best value kept\n",
                     measure.c_str(), format_double(snr_db).c_str());
    std::string row = measure + "," + spec.constellation + "," + spec.labeling + "," +
                      spec.channel + "," + format_double(snr_db) + "," +
                      format_double(r.value_bits) + "," + format_double(r.std_error) + ",";
    if (r.has_s_opt) row += format_double(r.s_opt);
    return row;
}

void run_capacity(const RunSpec& spec) {
    Workspace ws = open_workspace(spec);
    CsvWriter csv(spec.out);
    csv.header(spec);
    csv.line("measure,constellation,labeling,channel,snr_db,value_bits,std_error,s_opt");
    for (double snr_db : spec.snr_db) {
        ChannelPtr ch = open_channel(spec, snr_db);
        bicm_measure_result r{};
        check(bicm_cm_capacity(ch.get(), ws.constellation.get(), ws.engine.get(), &r));
        csv.line(measure_row(spec, "cm", snr_db, r));
        check(bicm_bicm_capacity(ch.get(), ws.constellation.get(), ws.labeling.get(),
                                 ws.engine.get(), &r));
        csv.line(measure_row(spec, "bicm", snr_db, r));
    }
}

void run_gmi(const RunSpec& spec) {
    Workspace ws = open_workspace(spec);
    std::vector<std::string> metrics = spec.metrics;
    if (metrics.empty()) metrics = {"sum"};
    CsvWriter csv(spec.out);
    csv.header(spec);
    csv.line("measure,constellation,labeling,channel,snr_db,value_bits,std_error,s_opt");
    for (double snr_db : spec.snr_db) {
        ChannelPtr ch = open_channel(spec, snr_db);
        for (const std::string& name : metrics) {
            bicm_measure_result r{};
            if (name == "pseudo") {
                MetricPtr q = open_metric(spec, "ext-tx", ws);
                check(bicm_pseudo_gmi(q.get(), ch.get(), ws.engine.get(), &r));
                csv.line(measure_row(spec, "pseudo_gmi", snr_db, r));
            } else {
                MetricPtr q = open_metric(spec, name, ws);
                check(bicm_gmi(q.get(), ch.get(), ws.engine.get(), &r));
                csv.line(measure_row(spec, "gmi_" + name, snr_db, r));
            }
        }
    }
}

void run_exponent(const RunSpec& spec) {
    Workspace ws = open_workspace(spec);
    std::vector<std::string> families = spec.families;
    if (families.empty()) families = {"cm", "ind", "sum", "maxlog"};
    const std::vector<double> rates = spec.rates.values();
    CsvWriter csv(spec.out);
    csv.header(spec);
    csv.line("family,constellation,labeling,channel,snr_db,R_bits,Er_nats,rho_opt,s_opt,"
             "std_error");
    for (double snr_db : spec.snr_db) {
        ChannelPtr ch = open_channel(spec, snr_db);
        for (const std::string& family : families) {
            std::string base = family;
            std::string s_mode = "optimize";
            if (const auto pos = family.rfind("-coupled");
                pos != std::string::npos && pos + 8 == family.size()) {
                base = family.substr(0, pos);
                s_mode = "coupled";
            }
            MetricPtr metric;
            if (base != "cm" && base != "ind") metric = open_metric(spec, base, ws);
            for (double rate : rates) {
                bicm_exponent_point p{};
                if (base == "cm")
                    check(bicm_exponent_cm(ch.get(), ws.constellation.get(), ws.engine.get(),
                                           rate, &p));
                else if (base == "ind")
                    check(bicm_exponent_ind(ch.get(), ws.constellation.get(), ws.labeling.get(),
                                            ws.engine.get(), rate, &p));
                else
                    check(bicm_exponent_q(metric.get(), ch.get(), ws.engine.get(),
                                          s_mode.c_str(), 1.0, rate, &p));
                csv.line(family + "," + spec.constellation + "," + spec.labeling + "," +
                         spec.channel + "," + format_double(snr_db) + "," +
                         format_double(p.rate_bits) + "," + format_double(p.er_nats) + "," +
                         format_double(p.rho_opt) + "," + format_double(p.s_opt) + "," +
                         format_double(p.std_error));
            }
        }
    }
}

void run_cutoff(const RunSpec& spec) {
    Workspace ws = open_workspace(spec);
    std::vector<std::string> metrics = spec.metrics;
    if (metrics.empty()) metrics = {"sum"};
    if (metrics.size() != 1)
        throw CliError("cutoff computes the generalized rate for one metric at a time", 2);
    MetricPtr metric = open_metric(spec, metrics[0], ws);
    CsvWriter csv(spec.out);
    csv.header(spec);
    csv.line("measure,constellation,labeling,channel,snr_db,value_bits,std_error,s_opt");
    for (double snr_db : spec.snr_db) {
        ChannelPtr ch = open_channel(spec, snr_db);
        bicm_cutoff_result r{};
        check(bicm_cutoff(metric.get(), ch.get(), ws.labeling.get(), ws.engine.get(), &r));
        const auto row = [&](const std::string& name, double nats, double se,
                             const std::string& s_opt) {
            csv.line(name + "," + spec.constellation + "," + spec.labeling + "," + spec.channel +
                     "," + format_double(snr_db) + "," + format_double(nats / ln2) + "," +
                     format_double(se / ln2) + "," + s_opt);
        };
        row("R0_cm", r.r0_cm, r.r0_cm_se, "");
        row("R0_q_" + metrics[0], r.r0_q, r.r0_q_se, format_double(r.r0_q_s_opt));
        row("R0_ind", r.r0_ind, r.r0_ind_se, "");
        row("R0_av", r.r0_av, r.r0_av_se, "");
    }
}

void run_validate(const RunSpec& spec) {
    Workspace ws = open_workspace(spec);
    std::vector<std::string> metrics = spec.metrics;
    if (metrics.empty()) metrics = {"matched"};
    CsvWriter csv(spec.out);
    csv.header(spec);
    csv.line("N,R_bits,metric,trials,Pe_hat,ci_halfwidth,bound,rho_opt,s_opt");
    for (const std::string& name : metrics) {
        MetricPtr metric = open_metric(spec, name, ws);
        ChannelPtr ch = open_channel(spec, spec.snr_db.front());
        bicm_validate_result r{};
        check(bicm_validate(metric.get(), ch.get(), ws.engine.get(), spec.block_length,
                            spec.rate, spec.trials, spec.seed, &r));
        csv.line(std::to_string(spec.block_length) + "," + format_double(spec.rate) + "," + name +
                 "," + std::to_string(r.trials) + "," + format_double(r.pe_hat) + "," +
                 format_double(r.ci_halfwidth) + "," + format_double(r.bound) + "," +
                 format_double(r.rho_opt) + "," + format_double(r.s_opt));
    }
}

struct Flags {
    std::optional<std::string> config, constellation, labeling, channel, snr_db, metrics,
        families, rates, ext_model, backend, out;
    std::optional<double> ext_sigma, rate;
    std::optional<long> samples, trials;
    std::optional<int> gh_nodes, block_length;
    std::optional<unsigned long long> seed;
};

void add_common_options(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config,
                    "key=value config file (a previously written CSV works)");
    cmd->add_option("--constellation", flags.constellation,
                    "bpsk|qpsk|psk8|psk16|qam16|qam64 or file:PATH");
    cmd->add_option("--labeling", flags.labeling, "brgc or file:PATH");
    cmd->add_option("--channel", flags.channel, "awgn|rayleigh");
    cmd->add_option("--snr-db", flags.snr_db, "SNR in dB (comma list allowed)");
    cmd->add_option("--metrics", flags.metrics, "matched,sum,maxlog,ext-tx,ext-hyp,pseudo");
    cmd->add_option("--ext-model", flags.ext_model, "none|perfect|gaussian");
    cmd->add_option("--ext-sigma", flags.ext_sigma, "per-bit LLR std deviation (gaussian)");
    cmd->add_option("--backend", flags.backend, "mc|gh");
    cmd->add_option("--samples", flags.samples, "Monte Carlo sample count");
    cmd->add_option("--gh-nodes", flags.gh_nodes, "Gauss-Hermite nodes per axis");
    cmd->add_option("--seed", flags.seed, "engine / experiment seed");
    cmd->add_option("--out", flags.out, "output CSV path (default stdout)");
}

void apply_flags(RunSpec& spec, const Flags& flags) {
    using bicm_cli::apply_key_value;
    if (flags.constellation) apply_key_value(spec, "constellation", *flags.constellation);
    if (flags.labeling) apply_key_value(spec, "labeling", *flags.labeling);
    if (flags.channel) apply_key_value(spec, "channel", *flags.channel);
    if (flags.snr_db) apply_key_value(spec, "snr_db", *flags.snr_db);
    if (flags.metrics) apply_key_value(spec, "metrics", *flags.metrics);
    if (flags.families) apply_key_value(spec, "families", *flags.families);
    if (flags.rates) apply_key_value(spec, "rates", *flags.rates);
    if (flags.ext_model) apply_key_value(spec, "ext_model", *flags.ext_model);
    if (flags.ext_sigma) spec.ext_sigma = *flags.ext_sigma;
    if (flags.backend) apply_key_value(spec, "backend", *flags.backend);
    if (flags.samples) spec.samples = *flags.samples;
    if (flags.gh_nodes) spec.gh_nodes = *flags.gh_nodes;
    if (flags.seed) spec.seed = *flags.seed;
    if (flags.block_length) spec.block_length = *flags.block_length;
    if (flags.rate) spec.rate = *flags.rate;
    if (flags.trials) spec.trials = *flags.trials;
    if (flags.out) spec.out = *flags.out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded modulation and BICM information measures, error exponents and "
                 "random-coding validation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bicm_version()));

    Flags flags;
    CLI::App* capacity = app.add_subcommand("capacity", "CM and BICM capacities");
    CLI::App* gmi = app.add_subcommand("gmi", "generalized mutual information");
    CLI::App* exponent = app.add_subcommand("exponent", "random-coding exponent curves");
    CLI::App* cutoff = app.add_subcommand("cutoff", "cutoff-rate family at rho=1");
    CLI::App* validate = app.add_subcommand("validate", "random-code decoder vs the bound");
    for (CLI::App* cmd : {capacity, gmi, exponent, cutoff, validate}) add_common_options(cmd, flags);
    exponent->add_option("--families", flags.families,
                         "cm,ind,matched,sum,maxlog plus -coupled variants");
    exponent->add_option("--rates", flags.rates, "rate grid start:step:stop (bits/use)");
    validate->add_option("--N", flags.block_length, "codeword length in symbols");
    validate->add_option("--rate", flags.rate, "code rate, bits per channel use");
    validate->add_option("--trials", flags.trials, "number of random-code trials");

    CLI11_PARSE(app, argc, argv);

    RunSpec spec;
    if (const char* env_seed = std::getenv("BICM_SEED")) {
        try {
            spec.seed = std::stoull(env_seed);
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: BICM_SEED is not an integer\n");
            return 2;
        }
    }

    try {
        if (flags.config) bicm_cli::apply_config_file(spec, *flags.config);
        apply_flags(spec, flags);
        spec.command = app.get_subcommands().front()->get_name();
        if (spec.command == "capacity") run_capacity(spec);
        else if (spec.command == "gmi") run_gmi(spec);
        else if (spec.command == "exponent") run_exponent(spec);
        else if (spec.command == "cutoff") run_cutoff(spec);
        else if (spec.command == "validate") run_validate(spec);
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
