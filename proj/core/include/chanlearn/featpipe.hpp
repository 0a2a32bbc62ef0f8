// SPDX-License-Identifier: Apache-2.0
//
// chanlearn: channel learning simulation suite
// Copyright (C) 2026 The chanlearn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CHANLEARN_FEATPIPE_HPP
#define CHANLEARN_FEATPIPE_HPP

#include "chanlearn/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

// Array response -> quantized angular-domain feature.
//
// The pipeline is |DFT(h_o)| -> log10 with a floor -> scalar quantization with
// a Lloyd-trained codebook -> codebook index mapped onto the grid
// {-1 + 2k/(L-1)}. One codebook is shared by every angular bin.
namespace chanlearn::features {

inline constexpr double kLogFloor = 1e-12;

// Scalar quantizer. `boundaries[j]` separates levels j and j+1 and is their
// midpoint.
class Codebook {
public:
    Codebook() = default;
    // Throws std::invalid_argument unless levels are finite, strictly
    // increasing and at least two.
    explicit Codebook(std::vector<double> levels);

    const std::vector<double> &levels() const { return levels_; }
    const std::vector<double> &boundaries() const { return boundaries_; }
    std::size_t size() const { return levels_.size(); }

    // Nearest level; values exactly on a boundary go to the lower index.
    std::size_t index_of(double value) const;

private:
    std::vector<double> levels_;
    std::vector<double> boundaries_;
};

struct FeatureVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// Magnitudes of the unnormalized forward DFT, X_m = sum_k h_k exp(-2*pi*i*m*k/n).
std::vector<double> angular_magnitude(const ChannelVector &h_o);

std::vector<double> log_compress(std::span<const double> mags, double floor = kLogFloor);

// Lloyd iteration on a pooled sample. Stops when the mean-squared error drops
// by less than `tol` in one iteration or after `max_iters` iterations. When
// `mse_trace` is given it receives the error of the initial codebook followed
// by the error after every iteration.
Codebook lloyd_train(std::span<const double> samples, int n_levels, int max_iters, double tol,
                     std::vector<double> *mse_trace = nullptr);

double quantization_mse(std::span<const double> samples, const Codebook &codebook);

FeatureVector quantize_normalize(std::span<const double> values, const Codebook &codebook);

FeatureVector make_feature(const ChannelVector &h_o, const Codebook &codebook, double floor = kLogFloor);

// level_index,codepoint,upper_boundary (the last upper boundary is "inf").
void write_codebook_csv(std::ostream &out, const Codebook &codebook);
Codebook read_codebook_csv(std::istream &in);

} // namespace chanlearn::features

#endif
