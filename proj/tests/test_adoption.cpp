#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "hirenet/adoption.hpp"
#include "hirenet/errors.hpp"
#include "hirenet/rng.hpp"
#include "support/synthetic.hpp"

using namespace hirenet;
using namespace hirenet::testing;

namespace {

const TopicSpec kTopic{"topic-modeling", {"topic modeling", "latent dirichlet"}};

FacultyCareer career(std::string id, NodeId phd, NodeId job, int hire,
                     std::vector<Publication> pubs) {
    FacultyCareer c{std::move(id), phd, job, hire, std::move(pubs)};
    std::stable_sort(c.publications.begin(), c.publications.end(),
                     [](const Publication& a, const Publication& b) { return a.year < b.year; });
    return c;
}

} // namespace

TEST_CASE("title_matches: phrase must be a contiguous token run") {
    CHECK(title_matches("A Survey of Topic Modeling", kTopic));
    CHECK_FALSE(title_matches("Topics in Model Theory", kTopic));
    CHECK(title_matches("Deep-Learning for Vision", {"dl", {"deep learning"}}));
    CHECK(title_matches("On LATENT Dirichlet Allocation!", kTopic));
    CHECK_FALSE(title_matches("latent semantic dirichlet", kTopic));
    CHECK(title_matches("topic modeling", kTopic));
    CHECK_FALSE(title_matches("", kTopic));
}

TEST_CASE("tokenize: lowercase, splits on non-alphanumeric runs") {
    CHECK(tokenize("Deep-Learning;  for __Vision2") ==
          std::vector<std::string>{"deep", "learning", "for", "vision2"});
    CHECK(tokenize("...") == std::vector<std::string>{});
}

TEST_CASE("topic_indicator: binary yearly flags over the publication span") {
    const auto c = career("f1", 0, 1, 2004,
                          {{2005, "Topic Modeling One"},
                           {2005, "Topic Modeling Again"},
                           {2006, "Compilers"},
                           {2007, "A Topic Modeling Note"}});
    const auto series = topic_indicator(c, kTopic);
    CHECK(series.start_year == 2005);
    CHECK(series.value(2005));
    CHECK_FALSE(series.value(2006));
    CHECK(series.value(2007));
    CHECK_FALSE(series.value(2004));
    CHECK_FALSE(series.value(2008));

    const auto none = topic_indicator(career("f2", 0, 1, 2004, {{2005, "Compilers"}}), kTopic);
    CHECK_FALSE(none.value(2005));
    const auto empty = topic_indicator(career("f3", 0, 1, 2004, {}), kTopic);
    CHECK(empty.empty());
}

TEST_CASE("classify_department: the three scenarios") {
    SUBCASE("hiring adoption: prior work within the grace window, continues after") {
        const std::vector<FacultyCareer> dept{
            career("hire", 3, 9, 2000, {{1999, "Topic Modeling A"}, {2001, "Topic Modeling B"}}),
            career("old", 2, 9, 1990, {{1995, "Compilers"}, {2003, "Topic Modeling C"}})};
        const auto cls = classify_department(9, dept, kTopic);
        CHECK(cls.scenario == Scenario::Hiring);
        CHECK(cls.adopter_faculty_id == "hire");
        CHECK(cls.adoption_year == 2000);
    }
    SUBCASE("non-hiring adoption: incumbent publishes first") {
        const std::vector<FacultyCareer> dept{
            career("old", 2, 9, 1990, {{1996, "Topic Modeling First"}}),
            career("hire", 3, 9, 2000, {{1999, "Topic Modeling A"}, {2001, "Topic Modeling B"}})};
        const auto cls = classify_department(9, dept, kTopic);
        CHECK(cls.scenario == Scenario::NonHiring);
        CHECK(cls.adopter_faculty_id == "old");
        CHECK(cls.adoption_year == 1996);
    }
    SUBCASE("null: nobody publishes on the topic") {
        const std::vector<FacultyCareer> dept{career("a", 0, 9, 1990, {{1995, "Compilers"}})};
        CHECK(classify_department(9, dept, kTopic).scenario == Scenario::Null);
        CHECK(classify_department(9, std::vector<FacultyCareer>{}, kTopic).scenario ==
              Scenario::Null);
    }
    SUBCASE("same-year tie resolves to non-hiring") {
        const std::vector<FacultyCareer> dept{
            career("hire", 3, 9, 2000, {{2000, "Topic Modeling A"}, {2001, "Topic Modeling B"}}),
            career("old", 2, 9, 1990, {{2000, "Topic Modeling Incumbent"}})};
        const auto cls = classify_department(9, dept, kTopic);
        CHECK(cls.scenario == Scenario::NonHiring);
    }
    SUBCASE("grace window boundary: prior work must precede t* + grace") {
        // First on-topic publication exactly at t* + grace does not count
        // as prior work, so this is a non-hiring adoption.
        const std::vector<FacultyCareer> dept{
            career("hire", 3, 9, 2000, {{2002, "Topic Modeling Late"}})};
        CHECK(classify_department(9, dept, kTopic, 2).scenario == Scenario::NonHiring);
        // With grace 3 the same timeline becomes a hiring adoption.
        CHECK(classify_department(9, dept, kTopic, 3).scenario == Scenario::Hiring);
    }
    SUBCASE("hire without post-arrival work is not a hiring adoption") {
        const std::vector<FacultyCareer> dept{
            career("hire", 3, 9, 2005, {{2003, "Topic Modeling Only Before"}})};
        const auto cls = classify_department(9, dept, kTopic);
        CHECK(cls.scenario == Scenario::NonHiring);
        CHECK(cls.adoption_year == 2003);
    }
}

TEST_CASE("classification is order-invariant and robust to off-topic noise") {
    auto corpus = planted_corpus(30, 5);
    auto shuffled = corpus.careers;
    rng::Sequence seq{rng::Stream(99)};
    rng::shuffle(shuffled, seq);

    const auto a = classify_all(corpus.careers, corpus.topic);
    const auto b = classify_all(shuffled, corpus.topic);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dept == b[i].dept);
        CHECK(a[i].scenario == b[i].scenario);
        CHECK(a[i].adopter_faculty_id == b[i].adopter_faculty_id);
    }

    // Adding an off-topic publication anywhere changes nothing.
    auto noisy = corpus.careers;
    for (auto& c : noisy) c.publications.push_back({1993, "Irrelevant Note on Parsers"});
    for (auto& c : noisy)
        std::stable_sort(c.publications.begin(), c.publications.end(),
                         [](const Publication& x, const Publication& y) { return x.year < y.year; });
    const auto c = classify_all(noisy, corpus.topic);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].scenario == c[i].scenario);
}

TEST_CASE("shifting all years shifts adoption years and nothing else") {
    const auto corpus = planted_corpus(12, 3);
    auto shifted = corpus.careers;
    for (auto& c : shifted) {
        c.hire_year += 7;
        for (auto& p : c.publications) p.year += 7;
    }
    const auto a = classify_all(corpus.careers, corpus.topic);
    const auto b = classify_all(shifted, corpus.topic);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].scenario == b[i].scenario);
        if (a[i].scenario != Scenario::Null) {
            CHECK(b[i].adoption_year == a[i].adoption_year + 7);
            CHECK(a[i].adopter_faculty_id == b[i].adopter_faculty_id);
        }
    }
}

TEST_CASE("planted corpora are recovered exactly") {
    const auto corpus = planted_corpus(60, 21);
    const auto got = classify_all(corpus.careers, corpus.topic);
    REQUIRE(got.size() == corpus.expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].dept == corpus.expected[i].dept);
        CHECK(got[i].scenario == corpus.expected[i].scenario);
        if (got[i].scenario != Scenario::Null) {
            CHECK(got[i].adopter_faculty_id == corpus.expected[i].adopter_faculty_id);
            CHECK(got[i].adoption_year == corpus.expected[i].adoption_year);
        }
    }
}

TEST_CASE("observed_hiring_fraction") {
    std::vector<DeptClassification> cls{{0, Scenario::Hiring, "a", 2000},
                                        {1, Scenario::NonHiring, "b", 2001},
                                        {2, Scenario::Null, "", 0},
                                        {3, Scenario::Hiring, "c", 1999}};
    CHECK(*observed_hiring_fraction(cls) == doctest::Approx(2.0 / 3.0));

    std::vector<DeptClassification> all_null{{0, Scenario::Null, "", 0}};
    CHECK_FALSE(observed_hiring_fraction(all_null).has_value());

    std::vector<DeptClassification> all_hiring{{0, Scenario::Hiring, "a", 2000}};
    CHECK(*observed_hiring_fraction(all_hiring) == 1.0);
}

TEST_CASE("transmission_arrows") {
    const std::vector<FacultyCareer> careers{
        career("a", 4, 9, 2000, {{1999, "Topic Modeling"}, {2001, "Topic Modeling"}}),
        career("b", 5, 8, 1995, {{1996, "Compilers"}})};
    const std::vector<DeptClassification> cls{{9, Scenario::Hiring, "a", 2000},
                                              {8, Scenario::Null, "", 0}};
    const auto arrows = transmission_arrows(cls, careers);
    REQUIRE(arrows.size() == 1);
    CHECK(arrows[0].from == 4);
    CHECK(arrows[0].to == 9);
    CHECK(arrows[0].year == 2000);

    const std::vector<DeptClassification> none{{8, Scenario::NonHiring, "b", 1996}};
    CHECK(transmission_arrows(none, careers).empty());
}

TEST_CASE("load_careers: JSON lines round trip and errors") {
    std::istringstream good(
        R"({"faculty_id":"f1","phd_institution":3,"job_institution":7,"hire_year":2001,"publications":[{"year":2002,"title":"B"},{"year":2000,"title":"A"}]})"
        "\n\n# comment\n"
        R"({"faculty_id":"f2","phd_institution":1,"job_institution":7,"hire_year":1999,"publications":[]})"
        "\n");
    const auto careers = load_careers(good, "c.jsonl");
    REQUIRE(careers.size() == 2);
    CHECK(careers[0].faculty_id == "f1");
    CHECK(careers[0].publications.front().year == 2000); // sorted after load
    CHECK(careers[1].publications.empty());

    std::istringstream bad("{\"faculty_id\":\"x\"}\n");
    CHECK_THROWS_AS(load_careers(bad, "c.jsonl"), load_error);

    std::istringstream dup(
        R"({"faculty_id":"f1","phd_institution":1,"job_institution":2,"hire_year":1999,"publications":[]})"
        "\n"
        R"({"faculty_id":"f1","phd_institution":1,"job_institution":2,"hire_year":1999,"publications":[]})"
        "\n");
    CHECK_THROWS_AS(load_careers(dup, "c.jsonl"), load_error);
}

TEST_CASE("load_keywords: comments, lowercasing, empty file") {
    std::istringstream in("# five keywords follow\nTopic Modeling\n  latent dirichlet  \n\n");
    const auto topic = load_keywords(in, "k.txt", "topic-modeling");
    CHECK(topic.name == "topic-modeling");
    REQUIRE(topic.keywords.size() == 2);
    CHECK(topic.keywords[0] == "topic modeling");
    CHECK(topic.keywords[1] == "latent dirichlet");

    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(load_keywords(empty, "k.txt", "t"), load_error);
}
