#include "hmdchan/io/pipeline.hpp"

#include "hmdchan/io/cir_container.hpp"
#include "hmdchan/io/grid_container.hpp"
#include "hmdchan/io/scene_json.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

namespace hmdchan::io
{

namespace fs = std::filesystem;

MetricSet compute_metrics(std::span<const EigenGainGrid> grids)
{
    const auto full_it =
        std::find_if(grids.begin(), grids.end(), [](const EigenGainGrid &g) { return g.config().mask() == 0xFF; });
    if (full_it == grids.end())
        throw std::invalid_argument("compute_metrics: the 8-panel grid is missing");
    const EigenGainGrid &full = *full_it;
    const CellField full_mean = grid_mean_over_subcarriers(full);

    MetricSet m;
    for (const auto &g : grids)
    {
        const PanelConfig &cfg = g.config();
        CellField mean = grid_mean_over_subcarriers(g);
        m.gain_tradeoff.push_back({cfg, gain_tradeoff(g, full).field});
        m.capacity_tradeoff.push_back({cfg, capacity_tradeoff(g, full).field});
        m.volatility.push_back({cfg, volatility(mean)});
        m.minimal_service.push_back({cfg, minimal_service_tradeoff(mean.values, full_mean.values)});
        m.mean_gain.push_back({cfg, std::move(mean)});
    }
    for (std::size_t p = 1; p < panel_count; ++p)
    {
        const auto find = [&](const PanelConfig &c) {
            return std::find_if(grids.begin(), grids.end(), [&](const EigenGainGrid &g) { return g.config() == c; });
        };
        const auto back = find(PanelConfig::backward(p));
        const auto front = find(PanelConfig::forward(p));
        if (back != grids.end() && front != grids.end())
            m.rear_headband.push_back({p, rear_headband_profit(*back, *front).field});
    }
    return m;
}

std::vector<fs::path> write_metric_csvs(const MetricSet &m, const fs::path &dir)
{
    std::vector<fs::path> out;
    auto put = [&](const char *name, const std::string &text) {
        out.push_back(dir / name);
        write_text_file(out.back(), text);
    };
    put(mean_gain_file, mean_gain_csv(m.mean_gain));
    put(gain_tradeoff_file, gain_tradeoff_csv(m.gain_tradeoff));
    put(capacity_tradeoff_file, capacity_tradeoff_csv(m.capacity_tradeoff));
    put(volatility_file, volatility_csv(m.volatility));
    put(minimal_service_file, minimal_service_csv(m.minimal_service));
    put(rear_headband_file, rear_headband_csv(m.rear_headband));
    return out;
}

std::vector<fs::path> write_figure_csvs(const MetricSet &m, const MobilityPattern &pattern, const fs::path &dir)
{
    std::vector<fs::path> out;
    auto put = [&](const char *name, const std::string &text) {
        out.push_back(dir / name);
        write_text_file(out.back(), text);
    };
    put(fig4_file, fig4_gain_ratio_csv(m.gain_tradeoff, pattern));
    put(fig5_file, fig5_volatility_scatter_csv(m.volatility));
    put(fig6_file, fig6_capacity_cdf_csv(m.capacity_tradeoff));
    put(fig7_file, fig7_rear_headband_hist_csv(m.rear_headband));
    return out;
}

namespace
{

template <class F>
auto in_stage(const char *stage, F &&fn) -> decltype(fn())
{
    try
    {
        return fn();
    }
    catch (const PipelineError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw PipelineError(stage, e.what());
    }
}

// Removes the staging directory unless released.
struct StagingGuard
{
    fs::path dir;
    bool active = true;
    ~StagingGuard()
    {
        if (active)
        {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    }
};

} // namespace

PipelineResult run_pipeline(const RunConfig &config, std::ostream *log)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto say = [&](const std::string &s) {
        if (log)
            *log << s << '\n' << std::flush;
    };

    in_stage("config", [&] { config.validate(); });
    const SynthSettings settings = config.synth_settings();
    const DenoiseParams dn = config.effective_denoise();
    const std::vector<PanelConfig> configs = config.evaluated_configs();
    const std::size_t n_snap = config.mobility.snapshot_count();

    std::vector<Scene> scenes = in_stage("scene", [&] {
        auto sc = read_scenes(config.scene_path);
        for (auto &s : sc)
        {
            if (config.desk_scale)
            {
                const ApArray d = ApArray::desk_scale();
                s.ap_array.rows = d.rows;
                s.ap_array.cols = d.cols;
            }
            s.validate(settings.max_delay());
        }
        return sc;
    });
    const GridAxes axes = in_stage("scene", [&] {
        std::vector<MeasurementKey> keys;
        for (const auto &s : scenes)
            for (std::size_t i = 0; i < n_snap; ++i)
                keys.push_back({s.position_index, s.scenario(), static_cast<std::uint32_t>(i)});
        return GridAxes::from_keys(keys);
    });
    say("scenes: " + std::to_string(scenes.size()) + ", snapshots per scene: " + std::to_string(n_snap) +
        ", configs: " + std::to_string(configs.size()));

    const fs::path out_dir = config.output_dir;
    StagingGuard staging{out_dir.parent_path() / (out_dir.filename().string() + ".partial")};
    in_stage("output", [&] {
        fs::remove_all(staging.dir);
        fs::create_directories(staging.dir);
        if (config.write_cir)
            fs::create_directories(staging.dir / "cir");
    });

    GridAssembler assembler(axes, settings.n_tap, configs);
    std::vector<SnapshotReport> reports;
    for (const auto &scene : scenes)
    {
        for (std::size_t i = 0; i < n_snap; ++i)
        {
            CirSnapshot cir = in_stage("synth", [&] {
                return synthesize_snapshot(scene, config.mobility, i, config.noise_power, config.seed, settings);
            });
            if (config.write_cir)
                in_stage("output", [&] { write_cir(staging.dir / "cir" / cir_file_name(cir.key), cir); });
            SnapshotGains g = in_stage("gains", [&] {
                return snapshot_gains(std::move(cir), configs, settings.layout, dn);
            });
            assembler.add(g);
            reports.push_back({g.key, std::move(g.report)});
        }
        say("rendered position " + std::to_string(scene.position_index) + " " +
            std::string(to_string(scene.scenario())));
    }
    std::sort(reports.begin(), reports.end(), [](const auto &a, const auto &b) { return a.key < b.key; });
    std::vector<EigenGainGrid> grids = in_stage("gains", [&] { return std::move(assembler).finish(); });
    const MetricSet metrics = in_stage("metrics", [&] { return compute_metrics(grids); });

    std::vector<fs::path> staged = in_stage("output", [&] {
        std::vector<fs::path> files;
        for (const auto &g : grids)
        {
            files.push_back(staging.dir / grid_file_name(g.config()));
            write_grid(files.back(), g);
        }
        files.push_back(staging.dir / denoise_report_file);
        write_text_file(files.back(), denoise_report_csv(reports));
        for (auto &p : write_metric_csvs(metrics, staging.dir))
            files.push_back(std::move(p));
        for (auto &p : write_figure_csvs(metrics, config.mobility, staging.dir))
            files.push_back(std::move(p));
        if (config.write_cir)
            for (const auto &e : fs::directory_iterator(staging.dir / "cir"))
                files.push_back(e.path());
        return files;
    });

    PipelineResult result;
    result.snapshots = reports.size();
    in_stage("output", [&] {
        fs::create_directories(out_dir);
        if (config.write_cir)
            fs::create_directories(out_dir / "cir");
        for (const auto &f : staged)
        {
            const fs::path dest = out_dir / fs::relative(f, staging.dir);
            fs::rename(f, dest);
            result.files.push_back(dest);
        }
    });
    std::sort(result.files.begin(), result.files.end());
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    say("wrote " + std::to_string(result.files.size()) + " files to " + out_dir.string() + " in " +
        std::to_string(secs) + " s");
    return result;
}

} // namespace hmdchan::io
