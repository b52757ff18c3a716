#include "hmdchan/synth.hpp"
#include "hmdchan/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace hmdchan
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
{
    std::uint64_t h = splitmix64(seed);
    for (auto v : {a, b, c, d})
        h = splitmix64(h ^ v);
    return h;
}

bool inside_room(const Vec3 &p, const std::array<double, 3> &room) noexcept
{
    return p.x >= 0.0 && p.x <= room[0] && p.y >= 0.0 && p.y <= room[1] && p.z >= 0.0 && p.z <= room[2];
}

// Distance from p along unit direction d to the room boundary.
double distance_to_boundary(const Vec3 &p, const Vec3 &d, const std::array<double, 3> &room) noexcept
{
    double t = std::numeric_limits<double>::infinity();
    const double pc[3] = {p.x, p.y, p.z};
    const double dc[3] = {d.x, d.y, d.z};
    for (int a = 0; a < 3; ++a)
    {
        if (dc[a] > 1e-15)
            t = std::min(t, (room[a] - pc[a]) / dc[a]);
        else if (dc[a] < -1e-15)
            t = std::min(t, -pc[a] / dc[a]);
    }
    return std::max(0.0, t);
}

double sinc(double x) noexcept
{
    if (std::abs(x) < 1e-15)
        return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

} // namespace

void Blocker::validate() const
{
    if (!(radius > 0.0))
        throw std::invalid_argument("Blocker: radius must be positive");
    if (!(height > 0.0))
        throw std::invalid_argument("Blocker: height must be positive");
    if (!(loss_db >= 0.0))
        throw std::invalid_argument("Blocker: loss_db must be non-negative");
}

void Scene::validate(double max_delay) const
{
    if (!inside_room(ap_position, room_bounds))
        throw std::invalid_argument("Scene: AP position outside the room");
    if (!inside_room(ue_base_position, room_bounds))
        throw std::invalid_argument("Scene: UE position outside the room");
    ap_array.validate();
    if (blocker)
        blocker->validate();
    std::size_t los = 0;
    for (std::size_t m = 0; m < mpcs.size(); ++m)
    {
        const Mpc &p = mpcs[m];
        if (p.is_los)
            ++los;
        if (!(p.excess_delay >= 0.0) || !(p.excess_delay < max_delay))
            throw std::invalid_argument("Scene: MPC " + std::to_string(m) + " delay " + std::to_string(p.excess_delay) +
                                        " s outside [0, " + std::to_string(max_delay) + ") s");
        if (!(std::abs(p.complex_gain) > 0.0) || !std::isfinite(std::abs(p.complex_gain)))
            throw std::invalid_argument("Scene: MPC " + std::to_string(m) + " has zero or non-finite gain");
    }
    if (los > 1)
        throw std::invalid_argument("Scene: more than one LOS path");
}

SynthSettings SynthSettings::desk_scale()
{
    SynthSettings s;
    s.layout = ArrayLayout::desk_scale();
    s.n_tap = 256;
    return s;
}

PulseTaps band_limited_pulse(double delay, double tap_spacing)
{
    if (!(delay >= 0.0) || !(tap_spacing > 0.0))
        throw std::invalid_argument("band_limited_pulse: need delay >= 0 and tap_spacing > 0");
    const double centre = delay / tap_spacing;
    const auto first = static_cast<std::ptrdiff_t>(std::ceil(centre - pulse_half_support - 1e-12));
    const auto last = static_cast<std::ptrdiff_t>(std::floor(centre + pulse_half_support + 1e-12));
    constexpr double window_half = pulse_half_support + 1.0;

    PulseTaps p;
    p.first_tap = first;
    double energy = 0.0;
    for (std::ptrdiff_t n = first; n <= last; ++n)
    {
        const double x = static_cast<double>(n) - centre;
        const double w = 0.42 + 0.5 * std::cos(pi * x / window_half) + 0.08 * std::cos(2.0 * pi * x / window_half);
        const double c = sinc(x) * w;
        p.coefficients.push_back(c);
        energy += c * c;
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (auto &c : p.coefficients)
        c *= scale;
    return p;
}

cplx element_response(const Vec3 &arrival_from, const Vec3 &position, const Vec3 &boresight, double q)
{
    const double c = dot(arrival_from, boresight);
    if (!(c > 0.0))
        return {0.0, 0.0};
    const double amplitude = std::pow(c, q);
    // Propagation direction is -arrival_from.
    const double phase = -2.0 * pi / carrier_wavelength * dot(-arrival_from, position);
    return std::polar(amplitude, phase);
}

cplx element_response(const Mpc &mpc, const Vec3 &position, const Vec3 &boresight, double q)
{
    return element_response(mpc.aoa.unit(), position, boresight, q);
}

bool segment_hits_cylinder(const Vec3 &a, const Vec3 &b, const Blocker &blk) noexcept
{
    // Horizontal part: |(a + t (b - a)) - c|^2 <= r^2 on the xy-plane.
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double fx = a.x - blk.center.x, fy = a.y - blk.center.y;
    const double qa = dx * dx + dy * dy;
    const double qb = 2.0 * (fx * dx + fy * dy);
    const double qc = fx * fx + fy * fy - blk.radius * blk.radius;
    double t0 = 0.0, t1 = 1.0;
    if (qa < 1e-300)
    {
        if (qc > 0.0)
            return false;
    }
    else
    {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0)
            return false;
        const double s = std::sqrt(disc);
        t0 = std::max(0.0, (-qb - s) / (2.0 * qa));
        t1 = std::min(1.0, (-qb + s) / (2.0 * qa));
        if (t0 > t1)
            return false;
    }
    // Vertical extent within the horizontal overlap.
    const double z0 = a.z + t0 * (b.z - a.z);
    const double z1 = a.z + t1 * (b.z - a.z);
    const double lo = blk.center.z, hi = blk.center.z + blk.height;
    return std::max(std::min(z0, z1), lo) <= std::min(std::max(z0, z1), hi);
}

std::vector<Mpc> apply_blockage(const Scene &scene, const UePose &pose)
{
    std::vector<Mpc> out = scene.mpcs;
    if (!scene.blocker)
        return out;
    const Blocker &blk = *scene.blocker;
    const double scale = std::pow(10.0, -blk.loss_db / 20.0);
    for (auto &m : out)
    {
        Vec3 far;
        if (m.is_los)
            far = scene.ap_position;
        else
        {
            const Vec3 u = m.aoa.unit();
            far = pose.center_of_mass + u * distance_to_boundary(pose.center_of_mass, u, scene.room_bounds);
        }
        if (segment_hits_cylinder(pose.center_of_mass, far, blk))
            m.complex_gain *= scale;
    }
    return out;
}

ComplexTensor3 render_paths(const Scene &scene, const std::vector<Mpc> &paths, const UePose &pose,
                            const SynthSettings &settings)
{
    const ArrayLayout &layout = settings.layout;
    const ApArray &ap = scene.ap_array;
    const std::size_t n_rx = layout.n_rx(), n_tx = ap.n_tx(), n_tap = settings.n_tap;
    ComplexTensor3 h(n_rx, n_tx, n_tap);

    // Element geometry relative to the receiver's reference point (its t = 0
    // centre of mass) and the AP centre.
    std::vector<ElementPlacement> rx(n_rx);
    for (std::size_t r = 0; r < n_rx; ++r)
    {
        rx[r] = element_position_and_boresight(r, layout, pose);
        rx[r].position -= scene.ue_base_position;
    }
    std::vector<Vec3> tx(n_tx);
    for (std::size_t t = 0; t < n_tx; ++t)
        tx[t] = ap.element_offset(t);
    const Vec3 ap_boresight = ap.boresight();

    std::vector<cplx> a_rx(n_rx), a_tx(n_tx);
    for (const Mpc &m : paths)
    {
        const Vec3 u_rx = m.aoa.unit();
        const Vec3 u_tx = m.aod.unit();
        for (std::size_t r = 0; r < n_rx; ++r)
        {
            const std::size_t pol = r % layout.polarizations;
            a_rx[r] = element_response(u_rx, rx[r].position, rx[r].boresight, settings.pattern_exponent) *
                      m.polarization_weights[std::min<std::size_t>(pol, 1)];
        }
        // Departure: the wave leaves along u_tx, so the AP element sees the
        // path as if it arrived from u_tx.
        for (std::size_t t = 0; t < n_tx; ++t)
            a_tx[t] = element_response(u_tx, tx[t], ap_boresight, settings.pattern_exponent);

        const PulseTaps pulse = band_limited_pulse(m.excess_delay, settings.tap_spacing);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, pulse.first_tap);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(
            static_cast<std::ptrdiff_t>(n_tap), pulse.first_tap + static_cast<std::ptrdiff_t>(pulse.coefficients.size()));

        for (std::size_t r = 0; r < n_rx; ++r)
        {
            if (a_rx[r] == cplx{})
                continue;
            const cplx gr = m.complex_gain * a_rx[r];
            for (std::size_t t = 0; t < n_tx; ++t)
            {
                const cplx c = gr * a_tx[t];
                if (c == cplx{})
                    continue;
                auto taps = h.pair(r, t);
                for (std::ptrdiff_t n = lo; n < hi; ++n)
                    taps[static_cast<std::size_t>(n)] += c * pulse.coefficients[static_cast<std::size_t>(n - pulse.first_tap)];
            }
        }
    }
    return h;
}

CirSnapshot synthesize_snapshot(const Scene &scene, const MobilityPattern &pattern, std::size_t i, double noise_power,
                                std::uint64_t seed, const SynthSettings &settings)
{
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw std::invalid_argument("synthesize: noise_power must be finite and non-negative");
    settings.layout.validate();
    pattern.validate();
    scene.validate(settings.max_delay());
    if (i >= pattern.snapshot_count())
        throw std::invalid_argument("synthesize: snapshot index " + std::to_string(i) + " out of range");

    const UePose pose = ue_pose_at(pattern.snapshot_time(i), pattern, scene.ue_base_position, scene.ue_heading_deg);
    CirSnapshot snap;
    snap.tensor = render_paths(scene, apply_blockage(scene, pose), pose, settings);
    snap.tap_spacing = settings.tap_spacing;
    snap.key = {scene.position_index, scene.scenario(), static_cast<std::uint32_t>(i)};

    if (noise_power > 0.0)
    {
        const double sigma = std::sqrt(noise_power / 2.0);
        auto &h = snap.tensor;
        const auto n_rx = static_cast<std::ptrdiff_t>(h.n_rx());
#pragma omp parallel for schedule(static) num_threads(worker_threads())
        for (std::ptrdiff_t r = 0; r < n_rx; ++r)
        {
            std::mt19937_64 rng(derive_seed(seed, scene.position_index, static_cast<std::uint64_t>(scene.scenario()), i,
                                            static_cast<std::uint64_t>(r)));
            std::normal_distribution<double> gauss(0.0, sigma);
            for (std::size_t t = 0; t < h.n_tx(); ++t)
                for (auto &z : h.pair(static_cast<std::size_t>(r), t))
                {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    z += cplx(re, im);
                }
        }
    }
    return snap;
}

std::vector<CirSnapshot> synthesize_measurement(const Scene &scene, const MobilityPattern &pattern, double noise_power,
                                                std::uint64_t seed, const SynthSettings &settings)
{
    std::vector<CirSnapshot> out;
    const std::size_t n = pattern.snapshot_count();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(synthesize_snapshot(scene, pattern, i, noise_power, seed, settings));
    return out;
}

} // namespace hmdchan
