#include "hmdchan/io/cir_container.hpp"
#include "hmdchan/io/grid_container.hpp"
#include "hmdchan/io/pipeline.hpp"
#include "hmdchan/io/scene_json.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace hmdchan;
using namespace hmdchan::io;

namespace
{

// Flags shared by subcommands that build a RunConfig.
struct Overrides
{
    std::string config_file;
    std::string scene;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool desk_scale = false;
    bool full_scale = false;
    double noise_power = 0.0;
    std::vector<std::string> configs;
    bool write_cir = false;
    double tau_max_ns = 0.0;
    double percentile = 0.0;
    double noise_lo_ns = 0.0;
    double noise_hi_ns = 0.0;

    CLI::Option *o_seed = nullptr, *o_noise = nullptr, *o_tau = nullptr, *o_pct = nullptr, *o_lo = nullptr,
                *o_hi = nullptr;

    void add_to(CLI::App &app, bool synth_flags)
    {
        app.add_option("-c,--config", config_file, "Run configuration JSON")->check(CLI::ExistingFile);
        app.add_option("-o,--output-dir", output_dir, "Output directory");
        app.add_flag("--desk-scale", desk_scale, "Reduced dimensions (4 elements/panel, 4x4 AP, 256 taps)");
        app.add_flag("--full-scale", full_scale, "Full dimensions (overrides a desk-scale config file)");
        o_tau = app.add_option("--tau-max-ns", tau_max_ns, "De-noising delay window");
        o_pct = app.add_option("--threshold-percentile", percentile, "Noise-floor percentile");
        o_lo = app.add_option("--noise-lo-ns", noise_lo_ns, "Noise region start");
        o_hi = app.add_option("--noise-hi-ns", noise_hi_ns, "Noise region end");
        app.add_option("--configs", configs, "Panel configurations (1-8, F3, B2, 01010010, I,III,VII)");
        if (synth_flags)
        {
            app.add_option("-s,--scene", scene, "Scene JSON");
            o_seed = app.add_option("--seed", seed, "Noise seed");
            o_noise = app.add_option("--noise-power", noise_power, "Per-sample noise variance");
            app.add_flag("--write-cir", write_cir, "Also write the rendered CIR containers");
        }
    }

    RunConfig resolve() const
    {
        RunConfig c = config_file.empty() ? RunConfig{} : read_run_config(config_file);
        if (!scene.empty())
            c.scene_path = scene;
        if (!output_dir.empty())
            c.output_dir = output_dir;
        if (o_seed && o_seed->count())
            c.seed = seed;
        if (o_noise && o_noise->count())
            c.noise_power = noise_power;
        if (desk_scale && full_scale)
            throw CLI::ValidationError("--desk-scale and --full-scale are exclusive");
        if (desk_scale)
            c.desk_scale = true;
        if (full_scale)
            c.desk_scale = false;
        if (write_cir)
            c.write_cir = true;
        if (!configs.empty())
        {
            c.configs.clear();
            for (const auto &s : configs)
            {
                if (s.size() == 1 && s[0] >= '1' && s[0] <= '8')
                    c.configs.push_back(PanelConfig::forward(static_cast<std::size_t>(s[0] - '0')));
                else
                    c.configs.push_back(PanelConfig::parse(s));
            }
        }
        if (o_tau->count() || o_pct->count() || o_lo->count() || o_hi->count())
        {
            DenoiseParams d = c.effective_denoise();
            if (o_tau->count())
                d.tau_max = tau_max_ns * 1e-9;
            if (o_pct->count())
                d.threshold_percentile = percentile;
            if (o_lo->count())
                d.noise_region_lo = noise_lo_ns * 1e-9;
            if (o_hi->count())
                d.noise_region_hi = noise_hi_ns * 1e-9;
            c.denoise = d;
        }
        return c;
    }
};

// Receive layout implied by a CIR row count (8 panels, dual polarization).
ArrayLayout layout_for_rows(std::size_t n_rx)
{
    ArrayLayout l;
    const std::size_t per_panel = panel_count * l.polarizations;
    if (n_rx == 0 || n_rx % per_panel != 0)
        throw std::invalid_argument("CIR has " + std::to_string(n_rx) + " rows, not a multiple of 16");
    l.elements_per_panel = n_rx / per_panel;
    l.validate();
    return l;
}

void ensure_dir(const fs::path &p)
{
    if (!p.empty())
        fs::create_directories(p);
}

int cmd_synth(const RunConfig &c)
{
    if (c.scene_path.empty())
        throw std::invalid_argument("synth: no scene given");
    const SynthSettings settings = c.synth_settings();
    auto scenes = read_scenes(c.scene_path);
    ensure_dir(c.output_dir);
    std::size_t n = 0;
    for (auto &s : scenes)
    {
        if (c.desk_scale)
        {
            s.ap_array.rows = ApArray::desk_scale().rows;
            s.ap_array.cols = ApArray::desk_scale().cols;
        }
        s.validate(settings.max_delay());
        for (std::size_t i = 0; i < c.mobility.snapshot_count(); ++i, ++n)
        {
            const CirSnapshot cir = synthesize_snapshot(s, c.mobility, i, c.noise_power, c.seed, settings);
            write_cir(c.output_dir / cir_file_name(cir.key), cir);
        }
    }
    std::cout << "wrote " << n << " CIR snapshots to " << c.output_dir.string() << "\n";
    return 0;
}

int cmd_denoise(const RunConfig &c, const std::vector<std::string> &inputs)
{
    ensure_dir(c.output_dir);
    std::vector<SnapshotReport> reports;
    for (const auto &in : inputs)
    {
        CirSnapshot cir = read_cir(in);
        const DenoiseParams p = c.denoise ? *c.denoise
                                          : (c.desk_scale ? DenoiseParams::for_tap_grid(cir.tensor.n_tap(), cir.tap_spacing)
                                                          : DenoiseParams{});
        DenoiseReport r = denoise_inplace(cir, p);
        write_cir(c.output_dir / fs::path(in).filename(), cir);
        reports.push_back({cir.key, std::move(r)});
    }
    std::sort(reports.begin(), reports.end(), [](const auto &a, const auto &b) { return a.key < b.key; });
    write_text_file(c.output_dir / denoise_report_file, denoise_report_csv(reports));
    std::cout << "de-noised " << inputs.size() << " snapshot(s)\n";
    return 0;
}

int cmd_gains(const RunConfig &c, const std::vector<std::string> &inputs)
{
    if (inputs.empty())
        throw std::invalid_argument("gains: no CIR inputs");
    const std::vector<PanelConfig> configs = c.evaluated_configs();
    std::vector<SnapshotGains> all;
    std::vector<MeasurementKey> keys;
    std::size_t n_tap = 0;
    for (const auto &in : inputs)
    {
        CirSnapshot cir = read_cir(in);
        if (n_tap != 0 && cir.tensor.n_tap() != n_tap)
            throw std::invalid_argument("gains: inputs differ in tap count");
        n_tap = cir.tensor.n_tap();
        const ArrayLayout layout = layout_for_rows(cir.tensor.n_rx());
        const DenoiseParams p = c.denoise ? *c.denoise
                                          : (c.desk_scale ? DenoiseParams::for_tap_grid(n_tap, cir.tap_spacing)
                                                          : DenoiseParams{});
        keys.push_back(cir.key);
        all.push_back(snapshot_gains(std::move(cir), configs, layout, p));
    }
    GridAssembler asm_(GridAxes::from_keys(keys), n_tap, configs);
    for (const auto &g : all)
        asm_.add(g);
    const auto grids = std::move(asm_).finish();
    ensure_dir(c.output_dir);
    std::vector<ConfigField> means;
    for (const auto &g : grids)
    {
        write_grid(c.output_dir / grid_file_name(g.config()), g);
        means.push_back({g.config(), grid_mean_over_subcarriers(g)});
    }
    write_text_file(c.output_dir / mean_gain_file, mean_gain_csv(means));
    std::cout << "wrote " << grids.size() << " grid(s) to " << c.output_dir.string() << "\n";
    return 0;
}

std::vector<EigenGainGrid> load_grids(const std::vector<std::string> &inputs)
{
    std::vector<EigenGainGrid> g;
    for (const auto &in : inputs)
        g.push_back(read_grid(in));
    return g;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Receive-panel configuration analysis for head-mounted mmWave arrays"};
    app.require_subcommand(1);

    Overrides pipe_o, synth_o, den_o, gains_o, met_o, rep_o;
    std::vector<std::string> den_in, gains_in, met_in, rep_in;
    bool dump_config = false;

    auto *pipe = app.add_subcommand("pipeline", "Synthesis through metrics and plot tables in one run");
    pipe_o.add_to(*pipe, true);
    pipe->add_flag("--dump-config", dump_config, "Print the resolved configuration and exit");

    auto *synth = app.add_subcommand("synth", "Render CIR snapshots for every scene");
    synth_o.add_to(*synth, true);

    auto *den = app.add_subcommand("denoise", "De-noise CIR containers and write a report");
    den_o.add_to(*den, false);
    den->add_option("inputs", den_in, "CIR files")->required()->check(CLI::ExistingFile);

    auto *gains = app.add_subcommand("gains", "Per-subcarrier dominant eigenvalue grids from CIR containers");
    gains_o.add_to(*gains, false);
    gains->add_option("inputs", gains_in, "CIR files")->required()->check(CLI::ExistingFile);

    auto *met = app.add_subcommand("metrics", "Metric tables from grid containers");
    met_o.add_to(*met, false);
    met->add_option("inputs", met_in, "Grid files (must include the 8-panel grid)")->required()->check(CLI::ExistingFile);

    auto *rep = app.add_subcommand("report", "Plot-ready tables from grid containers");
    rep_o.add_to(*rep, false);
    rep->add_option("inputs", rep_in, "Grid files (must include the 8-panel grid)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*pipe)
        {
            const RunConfig c = pipe_o.resolve();
            if (dump_config)
            {
                std::cout << run_config_to_json(c);
                return 0;
            }
            run_pipeline(c, &std::cerr);
            return 0;
        }
        if (*synth)
            return cmd_synth(synth_o.resolve());
        if (*den)
            return cmd_denoise(den_o.resolve(), den_in);
        if (*gains)
            return cmd_gains(gains_o.resolve(), gains_in);
        if (*met)
        {
            const RunConfig c = met_o.resolve();
            ensure_dir(c.output_dir);
            const auto grids = load_grids(met_in);
            write_metric_csvs(compute_metrics(grids), c.output_dir);
            return 0;
        }
        if (*rep)
        {
            const RunConfig c = rep_o.resolve();
            ensure_dir(c.output_dir);
            const auto grids = load_grids(rep_in);
            write_figure_csvs(compute_metrics(grids), c.mobility, c.output_dir);
            return 0;
        }
    }
    catch (const PipelineError &e)
    {
        std::cerr << "hmdchan: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "hmdchan: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
