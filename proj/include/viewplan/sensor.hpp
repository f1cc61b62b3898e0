#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "viewplan/errors.hpp"
#include "viewplan/reward.hpp"
#include "viewplan/rng.hpp"
#include "viewplan/vec3.hpp"

namespace viewplan {

struct NoiseModel {
    enum class Distribution { Gaussian, UniformSym };
    Distribution distribution = Distribution::Gaussian;
    double variance = 0.0;
};

struct OcclusionModel {
    enum class Mode { AlwaysDetect, FloorThreshold, Bernoulli };
    Mode mode = Mode::AlwaysDetect;
    double c_min = 0.0;    // FloorThreshold: detection requires field value >= c_min
    double p_miss = 0.0;   // Bernoulli: miss probability per reading
};

struct Measurement {
    double value = 0.0;
    bool detected = true;
    int step = 0;
    Vec3 position{0.0, 0.0, 0.0};
};

inline double draw_noise(const NoiseModel& noise, Rng& rng) {
    if (noise.variance == 0.0) {
        // keep the stream consumption identical to the noisy case
        if (noise.distribution == NoiseModel::Distribution::Gaussian) (void)rng.normal();
        else (void)rng.uniform();
        return 0.0;
    }
    if (noise.distribution == NoiseModel::Distribution::Gaussian)
        return rng.normal(0.0, std::sqrt(noise.variance));
    // symmetric uniform with matching variance: half-width sqrt(3 var)
    const double half = std::sqrt(3.0 * noise.variance);
    return rng.uniform(-half, half);
}

/// One confidence reading at p: field value plus noise when the detection
/// event fires, pure noise otherwise. Draw order is fixed (noise first, then
/// the Bernoulli miss draw when applicable) so sequences are reproducible.
inline Measurement measure(const RewardModel& model, const Vec3& p, const NoiseModel& noise,
                           const OcclusionModel& occ, Rng& rng, int step = 0) {
    const double mu = draw_noise(noise, rng);
    bool detected = true;
    switch (occ.mode) {
        case OcclusionModel::Mode::AlwaysDetect: detected = true; break;
        case OcclusionModel::Mode::FloorThreshold: detected = reward(model, p) >= occ.c_min; break;
        case OcclusionModel::Mode::Bernoulli: detected = rng.uniform() >= occ.p_miss; break;
    }
    Measurement m;
    m.value = detected ? reward(model, p) + mu : mu;
    m.detected = detected;
    m.step = step;
    m.position = p;
    return m;
}

struct ConfidenceRecord {
    Vec3 position{0.0, 0.0, 0.0};
    double value = 0.0;
    bool detected = true;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline double parse_double(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " value '" + s + "'", line_no);
    }
}

}  // namespace detail

/// Parses a confidence CSV: header `px,py,pz,confidence[,detected]`, one
/// sample per row, `detected` in {0,1} defaulting to 1.
inline std::vector<ConfidenceRecord> load_confidence_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    std::vector<ConfidenceRecord> records;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (!saw_header) {
            saw_header = true;
            if (fields.size() < 4 || fields[0] != "px" || fields[1] != "py" || fields[2] != "pz")
                throw ParseError("expected header px,py,pz,confidence[,detected]", line_no);
            continue;
        }
        if (fields.size() != 4 && fields.size() != 5)
            throw ParseError("expected 4 or 5 fields, got " + std::to_string(fields.size()),
                             line_no);
        ConfidenceRecord r;
        r.position = {detail::parse_double(fields[0], line_no, "px"),
                      detail::parse_double(fields[1], line_no, "py"),
                      detail::parse_double(fields[2], line_no, "pz")};
        r.value = detail::parse_double(fields[3], line_no, "confidence");
        if (fields.size() == 5) {
            if (fields[4] == "0") r.detected = false;
            else if (fields[4] == "1") r.detected = true;
            else throw ParseError("detected flag must be 0 or 1, got '" + fields[4] + "'", line_no);
        }
        records.push_back(r);
    }
    return records;
}

/// Replays externally logged confidences in order; an exhausted stream
/// reports end-of-data through the empty optional.
class ReplaySource {
public:
    explicit ReplaySource(std::vector<ConfidenceRecord> records) : records_(std::move(records)) {
        if (records_.empty()) throw ValidationError("replay source needs at least one record");
        for (const auto& r : records_)
            if (!all_finite(r.position))
                throw ValidationError("replay source positions must be finite");
    }

    static ReplaySource from_csv(const std::string& path) {
        return ReplaySource(load_confidence_csv(path));
    }

    std::optional<Measurement> next() {
        if (cursor_ >= records_.size()) return std::nullopt;
        const ConfidenceRecord& r = records_[cursor_];
        Measurement m;
        m.value = r.value;
        m.detected = r.detected;
        m.step = static_cast<int>(cursor_);
        m.position = r.position;
        ++cursor_;
        return m;
    }

    std::size_t size() const { return records_.size(); }
    std::size_t remaining() const { return records_.size() - cursor_; }

private:
    std::vector<ConfidenceRecord> records_;
    std::size_t cursor_ = 0;
};

}  // namespace viewplan
