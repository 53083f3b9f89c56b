#pragma once

#include <span>
#include <utility>
#include <vector>

namespace ooblab::channel {

/// Reference pressure for dB SPL, in pascal.
inline constexpr double kReferencePressurePa = 20e-6;

/// Piecewise-linear table of dB offsets against frequency. An empty table is flat (0 dB everywhere).
class FrequencyResponse {
public:
    FrequencyResponse() = default;
    explicit FrequencyResponse(std::vector<std::pair<double, double>> points);

    /// Throws RangeError outside the tabulated span.
    double offset_db(double frequency_hz) const;
    bool covers(double frequency_hz) const;
    bool flat() const noexcept { return points_.empty(); }
    const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

struct SoundSource {
    double spl_ref_db = 120.0;
    double reference_distance_m = 0.1;
    FrequencyResponse response;
    int n_sources = 1; // identical coherent units
};

/// Mechanical resonance of the sensing structure: the band in which sound couples in,
/// a second-order peak at f0, and the pressure-to-output conversion ks (times ka).
struct ResonantFront {
    double f_lo = 0.0;
    double f_hi = 0.0;
    double f0 = 0.0;
    double q = 0.0;
    double sensitivity = 1.0; // ks: sensor units per pascal
    double attenuation = 1.0; // ka

    /// Band with f0 at its midpoint and Q such that the weaker edge sits at 0.1 of peak.
    static ResonantFront from_band(double f_lo, double f_hi, double sensitivity = 1.0, double attenuation = 1.0);

    /// Resonance gain normalized to 1 at f0; zero outside [f_lo, f_hi].
    double gain(double frequency_hz) const;
};

void validate(const ResonantFront& front);

struct VibrationChannel {
    double coupling_gain = 1.0; // sensor units per drive unit
    int axis = 2;               // 0 = x, 1 = y, 2 = z
};

struct AnalogTone {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
};

double spl_to_pascal(double spl_db);
double pascal_to_spl(double pressure_pa);

/// L_sum = 20 log10(sum 10^(L_i/20)). Throws DomainError on an empty list.
double combine_coherent_sources(std::span<const double> levels_db);

/// SPL at distance D: spl_ref + response(F) + 20 log10(D_ref / D) + 20 log10(n_sources).
double spl_at_distance(const SoundSource& source, double frequency_hz, double distance_m);

/// Peak analog amplitude the tone induces in the sensor output for a full-scale drive.
double induced_amplitude(const SoundSource& source, double distance_m, double frequency_hz, const ResonantFront& front);

/// ks that makes induced_amplitude equal `target_amplitude` at the given geometry.
double solve_sensitivity(const SoundSource& source, double distance_m, double frequency_hz, ResonantFront front,
                         double target_amplitude);

AnalogTone vibration_drive(const VibrationChannel& channel, double frequency_hz, double amplitude);

} // namespace ooblab::channel
