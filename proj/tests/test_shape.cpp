#include <gtest/gtest.h>

#include <limits>

#include "flaash/shape.hpp"

using flaash::Index;
using flaash::Shape;

TEST(Shape, VolumeIsProductOfLengths) {
  EXPECT_EQ(Shape({7, 7, 512}).volume(), 25088u);
  EXPECT_EQ(Shape({1}).volume(), 1u);
}

TEST(Shape, RejectsEmptyOrZeroLengths) {
  EXPECT_THROW(Shape(std::vector<Index>{}), std::invalid_argument);
  EXPECT_THROW(Shape({3, 0, 2}), std::invalid_argument);
}

TEST(Shape, VolumeOverflowIsRejected) {
  const Index big = Index{1} << 40;
  EXPECT_THROW(Shape({big, big}), std::overflow_error);
  EXPECT_THROW(flaash::checked_mul(std::numeric_limits<Index>::max(), 2), std::overflow_error);
  EXPECT_EQ(flaash::checked_mul(0, std::numeric_limits<Index>::max()), 0u);
}

TEST(Shape, FlattenIsRowMajor) {
  const Shape s{2, 3, 4};
  EXPECT_EQ(s.strides(), (std::vector<Index>{12, 4, 1}));
  const std::vector<Index> c{1, 2, 3};
  EXPECT_EQ(s.flatten(c), 23u);
  EXPECT_EQ(s.unflatten(23), c);
  for (Index f = 0; f < s.volume(); ++f) EXPECT_EQ(s.flatten(s.unflatten(f)), f);
}

TEST(Shape, FlattenRejectsBadCoordinates) {
  const Shape s{2, 3};
  const std::vector<Index> out_of_range{2, 0};
  const std::vector<Index> wrong_arity{1};
  EXPECT_THROW(s.flatten(out_of_range), std::out_of_range);
  EXPECT_THROW(s.flatten(wrong_arity), std::invalid_argument);
}

TEST(Shape, WithoutMode) {
  EXPECT_EQ(Shape({2, 3, 4}).without_mode(1), Shape({2, 4}));
  EXPECT_EQ(Shape({5}).without_mode(0), Shape({1}));
  EXPECT_THROW(Shape({5}).without_mode(1), std::out_of_range);
}

TEST(Shape, ConcatFreeModes) {
  // I x J x K against X x Y, contracting J with Y, leaves I x K x X.
  EXPECT_EQ(flaash::concat_free_modes(Shape{2, 5, 3}, 1, Shape{4, 5}, 1), Shape({2, 3, 4}));
  EXPECT_EQ(flaash::concat_free_modes(Shape{6}, 0, Shape{6}, 0), Shape({1}));
}

TEST(Shape, ParseAndPrint) {
  EXPECT_EQ(flaash::parse_shape("7,7,512"), Shape({7, 7, 512}));
  EXPECT_EQ(flaash::parse_shape("3x1024"), Shape({3, 1024}));
  EXPECT_EQ(Shape({7, 7, 512}).to_string(), "7x7x512");
  for (const char* bad : {"", "3,", ",3", "a,b", "3,-1", "3,,4", "0", "99999999999999999999999"}) {
    EXPECT_THROW(flaash::parse_shape(bad), std::invalid_argument) << bad;
  }
}
