#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "schauder/matrix_io.hpp"

using namespace schauder;

TEST(MatrixIo, SaveLoadBitIdentical) {
    const auto path = (std::filesystem::temp_directory_path() / "schauder_io_roundtrip.mtx").string();
    const auto m = DenseMatrix::from_rows({{1.0 / 3.0, -2e-300, 0.1}, {1e300, 0.0, -0.7071067811865476}});
    save_matrix(path, m, "round trip");
    EXPECT_EQ(load_matrix(path), m);
    save_matrix(path, DenseMatrix::identity(3));
    EXPECT_EQ(load_matrix(path), DenseMatrix::identity(3));
    std::filesystem::remove(path);
}

TEST(MatrixIo, CommentsAndBlankLines) {
    std::istringstream in("# comment header\n\n2 2\n# inside\n1 2\n\n3 4\n");
    EXPECT_EQ(read_matrix(in), DenseMatrix::from_rows({{1, 2}, {3, 4}}));
}

TEST(MatrixIo, ExtraRowReportsLine) {
    std::istringstream in("2 2\n1 0\n0 1\n5 5\n");
    try {
        read_matrix(in);
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.line(), 4U);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(MatrixIo, MalformedInputs) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_matrix(in);
        } catch (const IoError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("2 2\n1 x\n0 1\n"), 2U);
    EXPECT_EQ(line_of("2 2\n1 0 3\n0 1\n"), 2U);
    EXPECT_EQ(line_of("2 2\n1 0\n"), 3U); // reported at end of input
    EXPECT_EQ(line_of("0 2\n"), 1U);
    EXPECT_EQ(line_of("2 2\n1 nan\n0 1\n"), 2U);
    EXPECT_THROW(load_matrix("/nonexistent/dir/m.mtx"), IoError);
}

TEST(MatrixIo, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 5.05, 1e-17, 123456789.123456789}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}
