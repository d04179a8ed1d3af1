#include "hirenet/adoption.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "hirenet/errors.hpp"

namespace hirenet {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

TopicMatcher::TopicMatcher(const TopicSpec& topic) {
    if (topic.keywords.empty()) throw std::invalid_argument("topic '" + topic.name + "' has no keywords");
    for (const auto& phrase : topic.keywords) {
        auto tokens = tokenize(phrase);
        if (!tokens.empty()) phrases_.push_back(std::move(tokens));
    }
    if (phrases_.empty()) throw std::invalid_argument("topic '" + topic.name + "' has no usable keywords");
}

bool TopicMatcher::matches(std::string_view title) const {
    const auto tokens = tokenize(title);
    for (const auto& phrase : phrases_) {
        if (phrase.size() > tokens.size()) continue;
        for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
            if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start)))
                return true;
        }
    }
    return false;
}

bool title_matches(std::string_view title, const TopicSpec& topic) {
    return TopicMatcher(topic).matches(title);
}

IndicatorSeries topic_indicator(const FacultyCareer& career, const TopicSpec& topic) {
    IndicatorSeries series;
    if (career.publications.empty()) return series;
    const TopicMatcher matcher(topic);
    const int first = career.publications.front().year;
    const int last = career.publications.back().year;
    series.start_year = first;
    series.flags.assign(static_cast<std::size_t>(last - first + 1), 0);
    for (const auto& pub : career.publications)
        if (matcher.matches(pub.title))
            series.flags[static_cast<std::size_t>(pub.year - first)] = 1;
    return series;
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::Null: return "null";
        case Scenario::Hiring: return "hiring";
        case Scenario::NonHiring: return "non_hiring";
    }
    return "?";
}

DeptClassification classify_activity(NodeId dept, std::span<const FacultyActivity> faculty, int grace) {
    DeptClassification result;
    result.dept = dept;

    constexpr int kNever = std::numeric_limits<int>::max();
    const auto first_year_of = [&](const FacultyActivity& f) {
        return f.on_topic_years.empty() ? kNever : f.on_topic_years.front();
    };

    bool any_activity = false;
    for (const auto& f : faculty) any_activity = any_activity || !f.on_topic_years.empty();
    if (!any_activity) return result; // scenario 1: the topic never arrived

    // A hiring adopter must have published on the topic both before
    // hire_year + grace and on/after hire_year, with nobody else at the
    // department active strictly before the hire. Same-year ties with
    // another faculty's first on-topic publication go to non-hiring, which
    // keeps the hiring fraction a lower bound.
    const FacultyActivity* hire_pick = nullptr;
    for (const auto& f : faculty) {
        if (f.on_topic_years.empty()) continue;
        const int hire = f.career->hire_year;
        const bool prior_work = f.on_topic_years.front() < hire + grace;
        const bool continues = f.on_topic_years.back() >= hire;
        if (!prior_work || !continues) continue;
        int others_first = kNever;
        for (const auto& other : faculty) {
            if (&other == &f) continue;
            others_first = std::min(others_first, first_year_of(other));
        }
        if (others_first <= hire) continue;
        if (!hire_pick ||
            std::tie(hire, f.on_topic_years.front(), f.career->faculty_id) <
                std::tie(hire_pick->career->hire_year, hire_pick->on_topic_years.front(),
                         hire_pick->career->faculty_id)) {
            hire_pick = &f;
        }
    }
    if (hire_pick) {
        result.scenario = Scenario::Hiring;
        result.adopter_faculty_id = hire_pick->career->faculty_id;
        result.adoption_year = hire_pick->career->hire_year;
        return result;
    }

    const FacultyActivity* first_pick = nullptr;
    for (const auto& f : faculty) {
        if (f.on_topic_years.empty()) continue;
        if (!first_pick ||
            std::tie(f.on_topic_years.front(), f.career->hire_year, f.career->faculty_id) <
                std::tie(first_pick->on_topic_years.front(), first_pick->career->hire_year,
                         first_pick->career->faculty_id)) {
            first_pick = &f;
        }
    }
    result.scenario = Scenario::NonHiring;
    result.adopter_faculty_id = first_pick->career->faculty_id;
    result.adoption_year = first_pick->on_topic_years.front();
    return result;
}

namespace {

std::vector<int> on_topic_years(const FacultyCareer& career, const TopicMatcher& matcher) {
    std::vector<int> years;
    for (const auto& pub : career.publications)
        if (matcher.matches(pub.title)) years.push_back(pub.year);
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());
    return years;
}

} // namespace

DeptClassification classify_department(NodeId dept, std::span<const FacultyCareer> careers,
                                       const TopicSpec& topic, int grace) {
    for (const auto& c : careers)
        if (c.job_institution != dept)
            throw std::invalid_argument("career '" + c.faculty_id + "' does not belong to department " +
                                        std::to_string(dept));
    const TopicMatcher matcher(topic);
    std::vector<FacultyActivity> activity;
    activity.reserve(careers.size());
    for (const auto& c : careers) activity.push_back({&c, on_topic_years(c, matcher)});
    return classify_activity(dept, activity, grace);
}

std::vector<DeptClassification> classify_all(std::span<const FacultyCareer> careers,
                                             const TopicSpec& topic, int grace) {
    const TopicMatcher matcher(topic);
    std::map<NodeId, std::vector<FacultyActivity>> departments;
    for (const auto& c : careers)
        departments[c.job_institution].push_back({&c, on_topic_years(c, matcher)});
    std::vector<DeptClassification> out;
    out.reserve(departments.size());
    for (const auto& [dept, activity] : departments)
        out.push_back(classify_activity(dept, activity, grace));
    return out;
}

std::optional<double> observed_hiring_fraction(std::span<const DeptClassification> classifications) {
    long long hiring = 0;
    long long adopted = 0;
    for (const auto& c : classifications) {
        if (c.scenario == Scenario::Null) continue;
        ++adopted;
        if (c.scenario == Scenario::Hiring) ++hiring;
    }
    if (adopted == 0) return std::nullopt;
    return static_cast<double>(hiring) / static_cast<double>(adopted);
}

std::vector<TransmissionArrow> transmission_arrows(std::span<const DeptClassification> classifications,
                                                   std::span<const FacultyCareer> careers) {
    std::unordered_map<std::string_view, const FacultyCareer*> by_id;
    for (const auto& c : careers) by_id[c.faculty_id] = &c;
    std::vector<TransmissionArrow> arrows;
    for (const auto& cls : classifications) {
        if (cls.scenario != Scenario::Hiring) continue;
        const auto it = by_id.find(cls.adopter_faculty_id);
        if (it == by_id.end())
            throw std::invalid_argument("classification references unknown faculty '" +
                                        cls.adopter_faculty_id + "'");
        arrows.push_back({it->second->phd_institution, it->second->job_institution, cls.adoption_year,
                          it->second->faculty_id});
    }
    return arrows;
}

std::vector<FacultyCareer> load_careers(std::istream& in, const std::string& filename) {
    std::vector<FacultyCareer> careers;
    std::string line;
    std::size_t lineno = 0;
    std::unordered_map<std::string, std::size_t> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto begin = line.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos || line[begin] == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            FacultyCareer career;
            career.faculty_id = j.at("faculty_id").get<std::string>();
            career.phd_institution = j.at("phd_institution").get<NodeId>();
            career.job_institution = j.at("job_institution").get<NodeId>();
            career.hire_year = j.at("hire_year").get<int>();
            for (const auto& pub : j.at("publications"))
                career.publications.push_back(
                    {pub.at("year").get<int>(), pub.at("title").get<std::string>()});
            std::stable_sort(career.publications.begin(), career.publications.end(),
                             [](const Publication& a, const Publication& b) { return a.year < b.year; });
            if (career.faculty_id.empty()) throw load_error(filename, lineno, "empty faculty_id");
            if (const auto [it, inserted] = seen.emplace(career.faculty_id, lineno); !inserted)
                throw load_error(filename, lineno,
                                 "duplicate faculty_id '" + career.faculty_id + "' (first at line " +
                                     std::to_string(it->second) + ")");
            careers.push_back(std::move(career));
        } catch (const nlohmann::json::exception& e) {
            throw load_error(filename, lineno, e.what());
        }
    }
    return careers;
}

TopicSpec load_keywords(std::istream& in, const std::string& filename, const std::string& topic_name) {
    TopicSpec topic;
    topic.name = topic_name;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        const auto begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos || line[begin] == '#') continue;
        const auto end = line.find_last_not_of(" \t");
        std::string phrase = line.substr(begin, end - begin + 1);
        for (char& c : phrase) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        topic.keywords.push_back(std::move(phrase));
    }
    if (topic.keywords.empty()) throw load_error(filename, lineno, "keyword file has no phrases");
    return topic;
}

} // namespace hirenet
