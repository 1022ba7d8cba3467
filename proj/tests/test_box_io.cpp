#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "nsbox/box_io.hpp"
#include "nsbox/nscrypto.hpp"

using namespace nsbox;

TEST_CASE("rational box round-trips bit-exactly") {
    const Correlation box = crypto::isotropic(rat(3, 7)).box;
    const Json j = box_to_json(box);
    const Correlation back = box_from_json(j);
    CHECK(back == box);
    // And through a second serialization: identical text.
    CHECK(box_to_json(back).dump() == j.dump());
}

TEST_CASE("float box round-trips through shortest-repr doubles") {
    const Correlation box = pr_box().to_float();
    const Json j = box_to_json(box);
    const Correlation back = box_from_json(j);
    CHECK(back.mode() == NumericMode::floating);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    CHECK(back.value(x, y, a, b) == box.value(x, y, a, b));
}

TEST_CASE("file round trip") {
    const std::string path = "io_test_box.json";
    write_box_file(path, pr_box());
    const Correlation back = read_box_file(path);
    CHECK(back == pr_box());
    std::remove(path.c_str());
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_WITH_AS(box_from_json(Json::object()), doctest::Contains("ParseError"),
                         Error);
    Json j = box_to_json(pr_box());
    j["mode"] = "imaginary";
    CHECK_THROWS_AS(box_from_json(j), Error);
    Json k = box_to_json(pr_box());
    k["table"][0][0][0] = Json::array({1, 2});
    CHECK_THROWS_AS(box_from_json(k), Error);
}

TEST_CASE("invalid tables surface their validation error") {
    Json j = box_to_json(pr_box());
    j["table"][0][0][0][0] = "-1/2";
    j["table"][0][0][1][1] = "1";
    CHECK_THROWS_WITH_AS(box_from_json(j), doctest::Contains("NegativeEntry"), Error);
}

TEST_CASE("missing file raises ParseError") {
    CHECK_THROWS_AS(read_box_file("does_not_exist_at_all.json"), Error);
}

TEST_CASE("decomposition JSON carries canonical indices and rational weights") {
    Decomposition d;
    d.vertex_indices = {2, 16};
    d.weights = {rat(1, 3), rat(2, 3)};
    d.nonlocal_weight = rat(2, 3);
    const Json j = decomposition_to_json(d);
    CHECK(j["terms"].size() == 2);
    CHECK(j["terms"][1]["vertex"] == 16);
    CHECK(j["terms"][1]["weight"] == "2/3");
    const Decomposition back = decomposition_from_json(j);
    CHECK(back.vertex_indices == d.vertex_indices);
    CHECK(back.weights == d.weights);
}
