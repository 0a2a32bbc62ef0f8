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

#ifndef CHANLEARN_TYPES_HPP
#define CHANLEARN_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace chanlearn {

using Complex = std::complex<double>;

// Planar position in meters.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

enum class ChannelRole { observable, unobservable };

// Complex response from one single-antenna user to a set of target antennas.
// Observable channels are the macro array response, unobservable ones the
// per-small-cell gains.
struct ChannelVector {
    std::vector<Complex> entries;
    ChannelRole role = ChannelRole::observable;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    const Complex &operator[](std::size_t i) const { return entries[i]; }
    Complex &operator[](std::size_t i) { return entries[i]; }
};

// Sum of squared magnitudes.
inline double power(const ChannelVector &h)
{
    double acc = 0.0;
    for (const auto &v : h.entries)
        acc += std::norm(v);
    return acc;
}

} // namespace chanlearn

#endif
