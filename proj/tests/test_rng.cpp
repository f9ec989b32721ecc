#include <array>
#include <cmath>
#include <cstdint>

#include "pcdim/rng.hpp"
#include "vendor/doctest.h"

using namespace pcdim;

TEST_CASE("philox4x32 known-answer vectors") {
  auto out = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("uniform draws are frozen") {
  const PhiloxStream stream(42, 0, StreamTag::Scores);
  const double expected[4][2] = {{0.59387017090945315, 0.78507007223752368},
                                 {0.35381221517993405, 0.57369045893403459},
                                 {0.59251627701496079, 0.036100744353042724},
                                 {0.67010128541323288, 0.69255485230629787}};
  for (std::uint64_t draw = 0; draw < 4; ++draw) {
    double u1 = 0.0, u2 = 0.0;
    stream.uniform_pair(draw, u1, u2);
    CHECK(u1 == expected[draw][0]);
    CHECK(u2 == expected[draw][1]);
  }
}

TEST_CASE("normal draws are frozen") {
  const PhiloxStream stream(42, 0, StreamTag::Scores);
  const double expected[8] = {0.22313596012364353,  -1.2897443370505444,
                              0.99690264933379802,  -0.31599798174999555,
                              1.2626366164098397,   0.183803423120346,
                              1.0265436530651757,   0.58844079273183802};
  for (std::uint64_t i = 0; i < 8; ++i)
    CHECK(stream.normal(i) == doctest::Approx(expected[i]).epsilon(5e-13));
}

TEST_CASE("scaled t3 draws are frozen") {
  const PhiloxStream stream(42, 0, StreamTag::ScoresAux);
  const double expected[8] = {1.6185159797021349,   1.0354077714126781,
                              0.36502831595156837,  -0.48609614476567442,
                              -0.63978048216534866, 0.48300172681788733,
                              0.09325576485455303,  1.5335616710810047};
  for (std::uint64_t i = 0; i < 8; ++i)
    CHECK(stream.scaled_t3(i) == doctest::Approx(expected[i]).epsilon(5e-13));
}

TEST_CASE("uniform draws stay inside the open unit interval") {
  const PhiloxStream stream(7, 3, StreamTag::Generic);
  for (std::uint64_t draw = 0; draw < 5000; ++draw) {
    double u1 = 0.0, u2 = 0.0;
    stream.uniform_pair(draw, u1, u2);
    CHECK(u1 > 0.0);
    CHECK(u1 < 1.0);
    CHECK(u2 > 0.0);
    CHECK(u2 < 1.0);
  }
}

TEST_CASE("streams are deterministic and replicate-separated") {
  const PhiloxStream a(5, 2, StreamTag::Scores);
  const PhiloxStream b(5, 2, StreamTag::Scores);
  const PhiloxStream other_rep(5, 3, StreamTag::Scores);
  const PhiloxStream other_tag(5, 2, StreamTag::Rotation);
  bool any_rep_diff = false, any_tag_diff = false;
  for (std::uint64_t i = 0; i < 64; ++i) {
    CHECK(a.normal(i) == b.normal(i));
    if (a.normal(i) != other_rep.normal(i)) any_rep_diff = true;
    if (a.normal(i) != other_tag.normal(i)) any_tag_diff = true;
  }
  CHECK(any_rep_diff);
  CHECK(any_tag_diff);
}

TEST_CASE("normal stream moments") {
  const PhiloxStream stream(123, 0, StreamTag::Scores);
  const std::size_t N = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < N; ++i) {
    const double z = stream.normal(i);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / static_cast<double>(N);
  const double var = sum2 / static_cast<double>(N) - mean * mean;
  CHECK(std::fabs(mean) <= 0.005);
  CHECK(std::fabs(var - 1.0) <= 0.01);
}

TEST_CASE("scaled t3 stream moments") {
  const PhiloxStream stream(123, 0, StreamTag::ScoresAux);
  const std::size_t N = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < N; ++i) {
    const double z = stream.scaled_t3(i);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / static_cast<double>(N);
  const double var = sum2 / static_cast<double>(N) - mean * mean;
  CHECK(std::fabs(mean) <= 0.01);
  CHECK(std::fabs(var - 1.0) <= 0.05);
}
