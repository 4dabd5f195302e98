//! Quantiles of the trace statistic under m common trends (row m - 1),
//! restricted constant, at [`super::TRACE_PROBABILITIES`]. Generated by
//! `cargo run --release --example trace_table -- 200000 1000`.

pub(crate) const TRACE_QUANTILES: [[f64; 17]; 6] = [
    [0.591, 0.783, 1.008, 1.346, 1.888, 2.385, 2.898, 3.452, 4.084, 4.856, 5.880, 7.540, 9.157, 10.766, 12.835, 14.308, 17.819],
    [4.544, 5.297, 6.014, 6.974, 8.307, 9.387, 10.418, 11.463, 12.580, 13.868, 15.503, 17.991, 20.303, 22.430, 25.100, 27.112, 31.396],
    [12.439, 13.799, 15.090, 16.655, 18.785, 20.444, 21.978, 23.491, 25.068, 26.847, 29.066, 32.353, 35.315, 37.987, 41.270, 43.638, 48.871],
    [24.409, 26.375, 28.172, 30.380, 33.294, 35.515, 37.498, 39.466, 41.503, 43.786, 46.566, 50.645, 54.140, 57.322, 61.282, 64.176, 70.033],
    [40.489, 43.059, 45.376, 48.213, 51.936, 54.702, 57.170, 59.571, 62.070, 64.793, 68.127, 72.978, 77.189, 80.983, 85.564, 88.728, 95.662],
    [60.432, 63.726, 66.601, 70.084, 74.505, 77.848, 80.812, 83.657, 86.575, 89.801, 93.639, 99.295, 104.199, 108.486, 113.803, 117.572, 124.804],
];
