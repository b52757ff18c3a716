#include "hmdchan/eigengain.hpp"
#include "hmdchan/parallel.hpp"
#include "hmdchan/synth.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>

using namespace hmdchan;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// AP on the y = 0.5 wall facing +y, receiver 4.5 m away looking back at it.
Scene broadside_scene()
{
    Scene s;
    s.ap_array = ApArray::desk_scale();
    s.ap_position = {3.0, 0.5, 1.5};
    s.ap_array.boresight_azimuth_deg = 90.0;
    s.ue_base_position = {3.0, 5.0, 1.5};
    s.ue_heading_deg = 270.0;
    Mpc los;
    los.is_los = true;
    los.order = 0;
    los.excess_delay = 20e-9;
    los.aoa = {270.0, 0.0};
    los.aod = {90.0, 0.0};
    s.mpcs = {los};
    return s;
}

UePose pose_at0(const Scene &s)
{
    return ue_pose_at(0.0, MobilityPattern{}, s.ue_base_position, s.ue_heading_deg);
}

double max_abs_diff(const ComplexTensor3 &a, const ComplexTensor3 &b)
{
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        m = std::max(m, std::abs(a.data()[j] - b.data()[j]));
    return m;
}

double max_abs(const ComplexTensor3 &a)
{
    double m = 0.0;
    for (auto x : a.data())
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("empty scene without noise renders zeros", "[synth]")
{
    Scene s = broadside_scene();
    s.mpcs.clear();
    const auto snaps = synthesize_measurement(s, MobilityPattern{}, 0.0, 1, SynthSettings::desk_scale());
    REQUIRE(snaps.size() == 33);
    for (const auto &c : snaps)
    {
        REQUIRE(c.tensor.n_rx() == 64);
        REQUIRE(c.tensor.n_tx() == 32);
        REQUIRE(c.tensor.n_tap() == 256);
        REQUIRE(max_abs(c.tensor) == 0.0);
    }
    REQUIRE(snaps[32].key == MeasurementKey{0, Scenario::LOS, 32});
}

TEST_CASE("single LOS path energy equals the pattern product", "[synth]")
{
    const Scene s = broadside_scene();
    const SynthSettings st = SynthSettings::desk_scale();
    const CirSnapshot c = synthesize_snapshot(s, MobilityPattern{}, 0, 0.0, 1, st);
    const std::size_t per = st.layout.rows_per_panel();
    for (std::size_t r = 0; r < c.tensor.n_rx(); ++r)
    {
        const std::size_t panel = r / per, pol = r % 2;
        // Off-boresight angle of this panel relative to the AP direction.
        const double off = std::abs(45.0 * (static_cast<double>(panel) - 6.0));
        const double cosv = std::cos(deg2rad(off));
        const double amp = cosv > 1e-12 ? cosv * cosv : 0.0;
        const double want = amp * amp * (pol == 0 ? 1.0 : 0.09);
        for (std::size_t t = 0; t < c.tensor.n_tx(); ++t)
        {
            double e = 0.0;
            for (auto x : c.tensor.pair(r, t))
                e += std::norm(x);
            if (want == 0.0)
                REQUIRE(e <= 1e-20);
            else
                REQUIRE(std::abs(e - want) <= 1e-6 * want);
        }
    }
}

TEST_CASE("noise is seeded and additive", "[synth]")
{
    const Scene s = broadside_scene();
    const SynthSettings st = SynthSettings::desk_scale();
    const MobilityPattern p;
    const double n0 = 0.01;
    const CirSnapshot clean = synthesize_snapshot(s, p, 4, 0.0, 1, st);
    const CirSnapshot a = synthesize_snapshot(s, p, 4, n0, 1, st);
    const CirSnapshot b = synthesize_snapshot(s, p, 4, n0, 2, st);
    const CirSnapshot a2 = synthesize_snapshot(s, p, 4, n0, 1, st);
    REQUIRE(a.tensor == a2.tensor);
    REQUIRE_FALSE(a.tensor == b.tensor);

    double var_a = 0.0, cross = 0.0;
    for (std::size_t j = 0; j < a.tensor.size(); ++j)
    {
        const cplx na = a.tensor.data()[j] - clean.tensor.data()[j];
        const cplx nb = b.tensor.data()[j] - clean.tensor.data()[j];
        var_a += std::norm(na);
        cross += (na * std::conj(nb)).real();
    }
    const double n = static_cast<double>(a.tensor.size());
    REQUIRE_THAT(var_a / n, WithinRel(n0, 0.02));
    REQUIRE(std::abs(cross / n) < 0.02 * n0);
}

TEST_CASE("rendering does not depend on the thread count", "[synth]")
{
    const Scene s = random_scene(5, {true, 4, {}, ApArray::desk_scale()});
    const SynthSettings st = SynthSettings::desk_scale();
    const char *old = std::getenv(thread_env_var);
    const std::string saved = old ? old : "";
    setenv(thread_env_var, "1", 1);
    const CirSnapshot one = synthesize_snapshot(s, MobilityPattern{}, 7, 0.01, 3, st);
    setenv(thread_env_var, "4", 1);
    const CirSnapshot four = synthesize_snapshot(s, MobilityPattern{}, 7, 0.01, 3, st);
    if (old)
        setenv(thread_env_var, saved.c_str(), 1);
    else
        unsetenv(thread_env_var);
    REQUIRE(one.tensor == four.tensor);
}

TEST_CASE("rendering is linear in the path set", "[synth]")
{
    const Scene s = random_scene(9, {false, 4, {}, ApArray::desk_scale()});
    const SynthSettings st = SynthSettings::desk_scale();
    const UePose pose = ue_pose_at(12.0, MobilityPattern{}, s.ue_base_position, s.ue_heading_deg);
    const std::size_t half = s.mpcs.size() / 2;
    const std::vector<Mpc> a(s.mpcs.begin(), s.mpcs.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<Mpc> b(s.mpcs.begin() + static_cast<std::ptrdiff_t>(half), s.mpcs.end());
    const ComplexTensor3 all = render_paths(s, s.mpcs, pose, st);
    ComplexTensor3 sum = render_paths(s, a, pose, st);
    const ComplexTensor3 hb = render_paths(s, b, pose, st);
    for (std::size_t j = 0; j < sum.size(); ++j)
        sum.data()[j] += hb.data()[j];
    REQUIRE(max_abs_diff(all, sum) <= 1e-12 * max_abs(all));
}

TEST_CASE("scaling path gains scales every dominant eigenvalue by |c|^2", "[synth]")
{
    Scene s = random_scene(21, {false, 4, {}, ApArray::desk_scale()});
    const SynthSettings st = SynthSettings::desk_scale();
    const DenoiseParams dn = DenoiseParams::for_tap_grid(st.n_tap, st.tap_spacing);
    const std::vector<PanelConfig> cfgs{PanelConfig::full(), PanelConfig::forward(3)};
    const auto g1 = snapshot_gains(synthesize_snapshot(s, MobilityPattern{}, 10, 0.0, 1, st), cfgs, st.layout, dn);
    const cplx c{0.6, -1.7};
    for (auto &m : s.mpcs)
        m.complex_gain *= c;
    const auto g2 = snapshot_gains(synthesize_snapshot(s, MobilityPattern{}, 10, 0.0, 1, st), cfgs, st.layout, dn);
    for (std::size_t j = 0; j < cfgs.size(); ++j)
        for (std::size_t k = 0; k < g1.per_config[j].size(); ++k)
            REQUIRE_THAT(g2.per_config[j][k], WithinRel(std::norm(c) * g1.per_config[j][k], 1e-9));
}

TEST_CASE("a blocker on the LOS never raises the LOS-only channel gain", "[synth]")
{
    Scene s = broadside_scene();
    const SynthSettings st = SynthSettings::desk_scale();
    const DenoiseParams dn = DenoiseParams::for_tap_grid(st.n_tap, st.tap_spacing);
    const std::vector<PanelConfig> cfgs{PanelConfig::full(), PanelConfig::forward(1), PanelConfig::backward(1)};
    for (std::size_t i : {0u, 5u, 20u, 32u})
    {
        Scene clear = s;
        Scene blocked = s;
        blocked.blocker = Blocker{{3.0, 4.0, 0.0}, 0.3, 1.8, 20.0};
        const auto a = snapshot_gains(synthesize_snapshot(clear, MobilityPattern{}, i, 0.0, 1, st), cfgs, st.layout, dn);
        const auto b =
            snapshot_gains(synthesize_snapshot(blocked, MobilityPattern{}, i, 0.0, 1, st), cfgs, st.layout, dn);
        for (std::size_t j = 0; j < cfgs.size(); ++j)
            for (std::size_t k = 0; k < a.per_config[j].size(); ++k)
                REQUIRE(b.per_config[j][k] <= a.per_config[j][k] * (1 + 1e-12));
    }
}

TEST_CASE("element response examples", "[synth]")
{
    const Vec3 z{0, 0, 0};
    const Vec3 bore{1, 0, 0};
    REQUIRE_THAT(std::abs(element_response(bore, z, bore)), WithinRel(1.0, 1e-15));
    REQUIRE(std::abs(element_response(Vec3{0, 1, 0}, z, bore)) == 0.0);
    REQUIRE(std::abs(element_response(normalized(Vec3{-1, 1, 0}), z, bore)) == 0.0);
    REQUIRE_THAT(std::abs(element_response(direction_from_angles(60.0, 0.0), z, bore)), WithinRel(0.25, 1e-12));

    const Vec3 p1{0, 0, 0}, p2{carrier_wavelength / 2.0, 0, 0};
    const cplx a = element_response(bore, p1, bore), b = element_response(bore, p2, bore);
    REQUIRE_THAT(std::abs(std::arg(b / a)), WithinRel(pi, 1e-12));
}

TEST_CASE("band-limited pulse examples", "[synth]")
{
    const double ts = 1.3e-9;
    const auto on = band_limited_pulse(20 * ts, ts);
    for (std::size_t j = 0; j < on.coefficients.size(); ++j)
    {
        const auto n = on.first_tap + static_cast<std::ptrdiff_t>(j);
        if (n == 20)
            REQUIRE_THAT(on.coefficients[j], WithinAbs(1.0, 1e-3));
        else
            REQUIRE(std::abs(on.coefficients[j]) <= 1e-3);
    }
    const auto half = band_limited_pulse(20.5 * ts, ts);
    const std::size_t m = half.coefficients.size();
    REQUIRE(m % 2 == 0);
    REQUIRE(half.first_tap + static_cast<std::ptrdiff_t>(m / 2) == 21);
    for (std::size_t j = 0; j < m / 2; ++j)
        REQUIRE_THAT(half.coefficients[j], WithinAbs(half.coefficients[m - 1 - j], 1e-14));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(0.0, 2000.0);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const auto p = band_limited_pulse(d(rng) * ts, ts);
        double e = 0.0;
        for (double c : p.coefficients)
            e += c * c;
        REQUIRE_THAT(e, WithinAbs(1.0, 1e-6));
        REQUIRE(p.coefficients.size() <= 2 * pulse_half_support + 1);
    }
    REQUIRE_THROWS_AS(band_limited_pulse(-1e-9, ts), std::invalid_argument);
}

TEST_CASE("blockage examples", "[synth]")
{
    Scene s = broadside_scene();
    const UePose pose = pose_at0(s);
    REQUIRE(apply_blockage(s, pose)[0].complex_gain == s.mpcs[0].complex_gain);

    s.blocker = Blocker{{3.0, 2.5, 0.0}, 0.15, 1.8, 20.0};
    REQUIRE_THAT(std::abs(apply_blockage(s, pose)[0].complex_gain), WithinRel(0.1, 1e-12));

    // Blocker edge 12 cm to the side of the LOS, 20 cm in front of the
    // receiver. Leaning 13 cm sideways clears it.
    s.blocker = Blocker{{3.0 - 0.03, 4.8, 0.0}, 0.15, 1.8, 20.0};
    REQUIRE(oracle::segment_hits_cylinder_sampled(s.ue_base_position, s.ap_position, *s.blocker));
    REQUIRE(std::abs(apply_blockage(s, pose)[0].complex_gain) < 0.5);
    UePose lean = pose;
    lean.center_of_mass.x += 0.13;
    REQUIRE_FALSE(oracle::segment_hits_cylinder_sampled(lean.center_of_mass, s.ap_position, *s.blocker));
    REQUIRE(apply_blockage(s, lean)[0].complex_gain == s.mpcs[0].complex_gain);
}

TEST_CASE("segment-cylinder test agrees with a sampling oracle", "[synth]")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 4.0), zr(-0.5, 3.0);
    int compared = 0;
    for (int trial = 0; trial < 3000; ++trial)
    {
        const Blocker b{{2.0, 2.0, 0.0}, 0.2 + 0.3 * u(rng) / 4.0, 1.0 + u(rng) / 4.0, 20.0};
        const Vec3 p{u(rng), u(rng), zr(rng)}, q{u(rng), u(rng), zr(rng)};
        Blocker shrunk = b, grown = b;
        shrunk.radius -= 1e-3;
        shrunk.center.z += 1e-3;
        shrunk.height -= 2e-3;
        grown.radius += 1e-3;
        grown.center.z -= 1e-3;
        grown.height += 2e-3;
        const bool in = oracle::segment_hits_cylinder_sampled(p, q, shrunk, 20001);
        const bool out = oracle::segment_hits_cylinder_sampled(p, q, grown, 20001);
        if (in != out)
            continue;
        ++compared;
        REQUIRE(segment_hits_cylinder(p, q, b) == in);
    }
    REQUIRE(compared > 2500);
}

TEST_CASE("image-method scene construction", "[synth]")
{
    Scene s = broadside_scene();
    s.mpcs = image_method_mpcs(s);
    REQUIRE(s.mpcs.size() > 1);
    REQUIRE(s.mpcs[0].is_los);
    REQUIRE_THAT(s.mpcs[0].excess_delay, WithinRel(10.4e-9, 1e-12));
    REQUIRE_THAT(std::abs(s.mpcs[0].complex_gain), WithinRel(1.0, 1e-12));
    for (std::size_t m = 1; m < s.mpcs.size(); ++m)
    {
        REQUIRE_FALSE(s.mpcs[m].is_los);
        REQUIRE(s.mpcs[m].excess_delay > s.mpcs[0].excess_delay);
        REQUIRE(std::abs(s.mpcs[m].complex_gain) < 1.0);
        REQUIRE((s.mpcs[m].order >= 1 && s.mpcs[m].order <= 2));
    }
    REQUIRE_NOTHROW(s.validate(SynthSettings{}.max_delay()));
}

TEST_CASE("random scenes are valid and the blocker covers the LOS", "[synth]")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const Scene s = random_scene(seed, {true, 4, {}, ApArray::desk_scale()});
        REQUIRE_NOTHROW(s.validate(SynthSettings::desk_scale().max_delay()));
        REQUIRE(s.scenario() == Scenario::NLOS);
        const auto eff = apply_blockage(s, pose_at0(s));
        REQUIRE(eff[0].is_los);
        REQUIRE_THAT(std::abs(eff[0].complex_gain), WithinRel(0.1, 1e-12));
        // Same geometry without the blocker.
        const Scene c = random_scene(seed, {false, 4, {}, ApArray::desk_scale()});
        REQUIRE(c.ue_base_position == s.ue_base_position);
        REQUIRE(c.mpcs.size() == s.mpcs.size());
    }
}

TEST_CASE("scene validation errors", "[synth]")
{
    Scene s = broadside_scene();
    s.mpcs[0].excess_delay = SynthSettings::desk_scale().max_delay();
    REQUIRE_THROWS_AS(synthesize_snapshot(s, MobilityPattern{}, 0, 0.0, 1, SynthSettings::desk_scale()),
                      std::invalid_argument);
    s = broadside_scene();
    s.mpcs.push_back(s.mpcs[0]);
    REQUIRE_THROWS_AS(s.validate(1e-6), std::invalid_argument);
    s = broadside_scene();
    s.mpcs[0].complex_gain = 0.0;
    REQUIRE_THROWS_AS(s.validate(1e-6), std::invalid_argument);
    s = broadside_scene();
    s.ue_base_position.x = -1.0;
    REQUIRE_THROWS_AS(s.validate(1e-6), std::invalid_argument);
    s = broadside_scene();
    REQUIRE_THROWS_AS(synthesize_snapshot(s, MobilityPattern{}, 0, -1.0, 1, SynthSettings::desk_scale()),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(synthesize_snapshot(s, MobilityPattern{}, 33, 0.0, 1, SynthSettings::desk_scale()),
                      std::invalid_argument);
    REQUIRE_THROWS_AS((Blocker{{0, 0, 0}, 0.0, 1.0, 20.0}.validate()), std::invalid_argument);
}
