#include "quakeloc/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "quakeloc/csv.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc::fixtures {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
    gen_.seed(seq);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  template <typename C>
  const auto& pick(const C& c) {
    return c[below(std::size(c))];
  }

 private:
  std::mt19937_64 gen_;
};

std::string title_case(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Sentence frames shared by both corpora. {L} and {M} are places, {N} a
// number, {D} a time reference, {P} a person, {G} relief goods, {A} an
// adjective and {O} an organisation.
const std::vector<std::string_view> kFrames = {
    "Help! {P} is stuck in {L} for two days with no food or shelter",
    "Massive earthquake just hit {L}, buildings collapsed everywhere",
    "Praying for everyone in {L} and {M}",
    "{L} needs urgent rescue teams, people are trapped under the rubble",
    "Live updates from {L}: another aftershock was felt {D}",
    "Volunteers are heading to {L} with {G} and {G}",
    "Reports say the death toll in {L} has risen to {N}",
    "Our hearts are with the people of {L} tonight",
    "Strong tremor felt in {L} {D}, stay safe everyone",
    "Donate now to support families displaced in {L}",
    "The hospital in {L} is overwhelmed, they need blood donors",
    "The road between {L} and {M} is blocked by a landslide",
    "Just talked to {P} in {L}, they are safe thank god",
    "Tsunami warning issued for coastal areas near {L}",
    "Search and rescue continues in {L} and nearby villages",
    "{L} is without power and water since {D}",
    "Anyone have news from {L}? {P} lives there",
    "Aid convoy arrived in {L} with {G}, tents and medicine",
    "So many buildings destroyed in {L}, this is {A}",
    "Magnitude {N} quake shook {L} {D}",
    "Families in {L} are sleeping outside in the cold after the quake",
    "Please share: we need an excavator in {L} right now",
    "Schools in {L} will stay closed until further notice",
    "{O} set up a field kitchen in {L}",
    "{P} from {L} is missing, please contact me if you see them",
    "{L} residents report cracks in every wall of the old town",
    "Firefighters are still working in {L} after the fire near the port",
    "Emergency shelters opened in {L} and {M}",
    "{A} scenes from {L} {D}, whole streets in ruins",
    "Heavy snow is slowing the rescue effort in {L}",
    "Students from {L} organised a donation drive for {G}",
    "The mayor of {L} asked for more assistance from the government",
    "Airport in {L} reopened for relief flights",
    "Water supply restored in parts of {L}",
    "Thousands homeless in {L} after the disaster",
    "Stay strong {L}, the whole country is with you",
    "Update: {N} people rescued alive in {L} overnight",
    "I was in {L} when the ground started shaking, never been so scared",
    "Officials in {L} warn of more aftershocks this week",
    "Please RT: trapped family at the old market in {L}",
    "Teams from {M} are helping in {L}",
    "Power lines down across {L}, avoid the coast road",
    "{G} and {G} urgently needed in {L}",
    "Collapsed bridge near {L} cut off three villages",
    "No news from {L} since {D}, phone lines are dead",
    "{O} says {N} volunteers are on the way to {L}",
    "Drone footage shows the damage in {L} is worse than we thought",
    "We drove from {M} to {L} with a van full of {G}",
    "{P} in {L} says the shaking lasted almost a minute",
    "The old temple in {L} is gone, {A}",
    "Evacuation ordered for low lying parts of {L}",
    "Checked in on {P} near {L}, house damaged but everyone ok",
    "Long queues for {G} in {L} {D}",
    "Roads into {L} finally open, trucks with {G} getting through",
    "Another night in the car for families from {L}",
    "Fishing boats in {L} were thrown onto the pier by the tsunami",
    "Death toll in {L} and {M} climbs to {N}",
    "Seismic activity near {L} is still very high according to experts",
    "Anyone in {L} who needs a place to stay, my door is open",
    "Sending love to {L} from {M}",
    "Another strong aftershock {D}, everyone stay away from the coast",
    "Thoughts and prayers for all the families affected by this tragedy",
    "Rescue teams are working around the clock, {A} people",
    "How can I donate? Looking for a trusted charity",
    "The footage of the collapsed houses is just devastating",
    "Felt the shaking {D}, my whole apartment was swaying",
    "Please check on your neighbours and elderly relatives",
    "Still shaking after that tremor, could not sleep at all",
    "Emergency alert on every phone {D}, scary moment",
    "So much solidarity from people all over the world",
    "{O} is collecting {G} and {G}, drop them at any station",
    "Cannot stop watching the news, this is {A}",
    "{P} keeps asking when we can go home",
    "If you felt it {D}, check your gas lines before cooking",
    "The aftermath is {A}, so many lives lost",
};

const std::vector<std::string_view> kTimeRefs = {"this morning", "last night", "today", "again", "an hour ago",
                                                 "at dawn", "on Monday", "tonight", "yesterday", "just now",
                                                 "around noon", "twice tonight"};
const std::vector<std::string_view> kPeople = {"my nephew", "my mother", "our neighbour", "a friend",
                                               "my cousin", "my grandmother", "our teacher", "a colleague",
                                               "my brother", "the kids", "my aunt", "an old classmate"};
const std::vector<std::string_view> kGoods = {"blankets", "water", "food", "medicine", "tents", "batteries",
                                              "baby formula", "warm clothes", "generators", "heaters",
                                              "hygiene kits", "diapers"};
const std::vector<std::string_view> kAdjectives = {"heartbreaking", "terrible", "awful", "unbelievable",
                                                   "horrible", "surreal", "so sad", "frightening",
                                                   "incredible", "beyond words"};
const std::vector<std::string_view> kOrgs = {"Red Cross", "UNICEF", "the army", "local volunteers",
                                             "Doctors Without Borders", "the coast guard", "our church",
                                             "the city council", "Save the Children", "a local mosque"};
const std::vector<std::string_view> kOpeners = {"BREAKING:", "UPDATE:", "URGENT", "Please help.", "Omg",
                                                "NEWS:", "Wow.", "Ugh,", "Honestly", "Just now:",
                                                "RT @reliefnews:", "Thread:", "PLEASE READ", "Oh no."};
const std::vector<std::string_view> kClosers = {"Stay safe.", "Pray for them.", "Please share.", "RT please",
                                                "So sad.", "Unreal.", "We will rebuild.",
                                                "Thank you rescuers!", "Keep them in your prayers.",
                                                "More soon.", "Details below."};
const std::vector<std::string_view> kEmoji = {"\xF0\x9F\x99\x8F", "\xF0\x9F\x92\x94", "\xF0\x9F\x98\xA2",
                                              "\xE2\x80\xBC\xEF\xB8\x8F", "\xF0\x9F\x86\x98",
                                              "\xF0\x9F\x98\xB0"};
const std::vector<std::string_view> kTurkishLines = {
    "Deprem b\xC3\xB6lgesinde yard\xC4\xB1m bekleyen \xC3\xA7ok insan var",
    "Enkaz alt\xC4\xB1nda kalanlar i\xC3\xA7in dua edin",
    "Acil \xC3\xA7" "ad\xC4\xB1r ve battaniye laz\xC4\xB1m",
    "Ge\xC3\xA7mi\xC5\x9F olsun t\xC3\xBCrkiyem",
};

std::string random_url(Rng& rng) {
  static constexpr std::string_view kChars = "abcdefghijkmnpqrstuvwxyzABCDEFGHJKLMNPQRSTUVWXYZ23456789";
  std::string url = "https://t.co/";
  for (int i = 0; i < 10; ++i) url.push_back(kChars[rng.below(kChars.size())]);
  return url;
}

std::string capitalize_first(std::string s) { return title_case(std::move(s)); }

// Renders one frame; place_of() supplies the surface form of each place slot.
std::string render_frame(std::string_view frame, Rng& rng, const std::function<std::string()>& place_of) {
  std::string out;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (frame[i] == '{' && i + 2 < frame.size() && frame[i + 2] == '}') {
      std::string piece;
      switch (frame[i + 1]) {
        case 'L':
        case 'M':
          piece = place_of();
          break;
        case 'N':
          piece = rng.chance(0.3) ? std::to_string(5 + rng.below(3)) + "." + std::to_string(rng.below(10))
                                  : std::to_string(2 + rng.below(400));
          break;
        case 'D':
          piece = rng.pick(kTimeRefs);
          break;
        case 'P':
          piece = rng.pick(kPeople);
          break;
        case 'G':
          piece = rng.pick(kGoods);
          break;
        case 'A':
          piece = rng.pick(kAdjectives);
          break;
        case 'O':
          piece = rng.pick(kOrgs);
          break;
      }
      if (out.empty()) piece = capitalize_first(piece);
      out += piece;
      i += 2;
      continue;
    }
    out.push_back(frame[i]);
  }
  return out;
}

// Opener, one or two frames and a closer.
std::string compose_tweet(Rng& rng, const std::function<std::string()>& place_of) {
  std::string text;
  if (rng.chance(0.35)) text = std::string(rng.pick(kOpeners)) + " ";
  text += render_frame(rng.pick(kFrames), rng, place_of);
  if (rng.chance(0.25)) {
    text += rng.chance(0.5) ? ". " : "! ";
    text += render_frame(rng.pick(kFrames), rng, place_of);
  }
  if (rng.chance(0.3)) text += (rng.chance(0.5) ? ". " : " ") + std::string(rng.pick(kClosers));
  return text;
}

// Tweets write place names in whatever case the author happens to type.
std::string vary_case(std::string name, Rng& rng) {
  double r = rng.unit();
  if (r < 0.25) {
    name = casefold(name);
  } else if (r < 0.30) {
    for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

LocationRecord record(std::int64_t id, std::string name, double lat, double lon, char fclass,
                      std::string cc, std::int64_t pop, std::vector<std::string> alts = {}) {
  LocationRecord r;
  r.geoname_id = id;
  r.ascii_name = name;
  r.name = std::move(name);
  r.alternate_names = std::move(alts);
  r.latitude = lat;
  r.longitude = lon;
  r.feature_class = fclass;
  r.country_code = std::move(cc);
  r.population = pop;
  return r;
}

struct TweetBuilder {
  Rng& rng;
  std::vector<RawTweet> out;
  std::size_t next_id = 1;
  std::string id_prefix;

  void emit(std::string content, Timestamp ts, std::optional<std::string> lang,
            std::optional<std::vector<std::string>> tags) {
    RawTweet t;
    t.id = id_prefix + std::to_string(next_id++);
    t.timestamp = ts;
    t.content = std::move(content);
    t.language = std::move(lang);
    t.hashtags = std::move(tags);
    out.push_back(std::move(t));
  }
};

}  // namespace

std::vector<std::string> japanese_place_names(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string_view> kSyllables = {
      "ka", "ki", "ku", "ke", "ko", "sa", "shi", "su", "se", "so", "ta", "chi", "tsu", "te", "to",
      "na", "ni", "nu", "ne", "no", "ha", "hi", "fu", "he", "ho", "ma", "mi", "mu", "me", "mo",
      "ya", "yu", "yo", "ra", "ri", "ru", "re", "ro", "wa", "ga", "gi", "go", "za", "zu", "da",
      "ba", "be", "bo"};
  static const std::vector<std::string_view> kSuffixes = {
      "hama", "saki", "yama", "kawa", "shima", "machi", "mura", "zawa", "oka", "hara",
      "gawa", "sato", "ura", "no", "ta", "da", "mi", "tsu"};
  static const std::vector<std::string_view> kQualifiers = {"Kita", "Minami", "Higashi", "Nishi",
                                                           "Kami", "Shimo", "Naka"};
  Rng rng(seed, 0x6e616d65u);
  std::set<std::string> seen = {"tokyo", "osaka", "yotsuhama", "wajima", "suzu", "nanao",
                                "anamizu", "kanazawa", "toyama", "niigata", "noto", "hakui",
                                "kyoto", "nagoya", "shika"};
  std::vector<std::string> names;
  while (names.size() < n) {
    std::string stem;
    std::size_t syllables = 1 + rng.below(2);
    for (std::size_t i = 0; i < syllables; ++i) stem += rng.pick(kSyllables);
    stem += rng.pick(kSuffixes);
    if (stem.size() < 5 || stem.size() > 12) continue;
    std::string name = title_case(stem);
    if (rng.chance(0.12)) name = std::string(rng.pick(kQualifiers)) + " " + name;
    if (!seen.insert(casefold(name)).second) continue;
    names.push_back(std::move(name));
  }
  return names;
}

std::vector<LocationRecord> japan_records(std::size_t n_synthetic, std::uint64_t seed) {
  std::vector<LocationRecord> out = {
      record(1850147, "Tokyo", 35.6895, 139.6917, 'P', "JP", 37000000),
      record(1853909, "Osaka", 34.6937, 135.5022, 'P', "JP", 2700000),
      record(1850500, "Yotsuhama", 34.2536, 133.6402, 'P', "JP", 3100),
      record(1848976, "Wajima", 37.3906, 136.8992, 'P', "JP", 27000),
      record(1851995, "Suzu", 37.4367, 137.2606, 'P', "JP", 14000),
      record(1855568, "Nanao", 37.0431, 136.9675, 'P', "JP", 50000),
      record(1865309, "Anamizu", 37.2333, 136.9000, 'P', "JP", 8000),
      record(1860243, "Kanazawa", 36.5613, 136.6562, 'P', "JP", 460000),
      record(1849876, "Toyama", 36.6953, 137.2113, 'P', "JP", 410000),
      record(1855431, "Niigata", 37.9161, 139.0364, 'P', "JP", 780000),
      record(1855200, "Noto", 37.3064, 137.1502, 'P', "JP", 16000),
      record(1863027, "Hakui", 36.8931, 136.7794, 'P', "JP", 20000),
      record(1857910, "Kyoto", 35.0116, 135.7681, 'P', "JP", 1460000),
      record(1856057, "Nagoya", 35.1815, 136.9066, 'P', "JP", 2300000),
      record(1852225, "Shika", 37.0200, 136.7700, 'P', "JP", 19000),
  };
  Rng rng(seed, 0x6a70u);
  auto names = japanese_place_names(n_synthetic, seed);
  for (std::size_t i = 0; i < names.size(); ++i) {
    double lat, lon;
    if (rng.chance(0.5)) {
      lat = 36.6 + rng.unit() * 1.0;
      lon = 136.5 + rng.unit() * 1.1;
    } else {
      lat = 31.5 + rng.unit() * 11.5;
      lon = 130.5 + rng.unit() * 14.5;
    }
    auto pop = static_cast<std::int64_t>(std::exp(4.6 + rng.unit() * 7.6));
    lat = std::round(lat * 1e4) / 1e4;
    lon = std::round(lon * 1e4) / 1e4;
    out.push_back(record(2000000 + static_cast<std::int64_t>(i), names[i], lat, lon, 'P', "JP", pop));
  }
  return out;
}

std::vector<LocationRecord> turkey_records() {
  return {
      record(314830, "Gaziantep", 37.0662, 37.3833, 'P', "TR", 2100000, {"Antep", "Ayintap"}),
      record(312394, "Hatay", 36.2021, 36.1600, 'P', "TR", 1600000),
      record(323779, "Antakya", 36.2066, 36.1572, 'P', "TR", 400000, {"Antioch"}),
      record(310859, "Kahramanmara\xC5\x9F", 37.5858, 36.9371, 'P', "TR", 1100000,
             {"Kahramanmaras", "Maras"}),
      record(304922, "Malatya", 38.3552, 38.3095, 'P', "TR", 800000),
      record(325330, "Ad\xC4\xB1yaman", 37.7648, 38.2786, 'P', "TR", 630000, {"Adiyaman"}),
      record(303827, "Osmaniye", 37.0746, 36.2464, 'P', "TR", 550000),
      record(316541, "Diyarbak\xC4\xB1r", 37.9144, 40.2306, 'P', "TR", 1800000, {"Diyarbakir"}),
      record(298333, "\xC5\x9E" "anl\xC4\xB1urfa", 37.1591, 38.7969, 'P', "TR", 2100000, {"Sanliurfa", "Urfa"}),
      record(325363, "Adana", 37.0000, 35.3213, 'P', "TR", 2200000),
      record(311111, "\xC4\xB0skenderun", 36.5872, 36.1735, 'P', "TR", 250000, {"Iskenderun"}),
      record(315808, "Elbistan", 38.2059, 37.1983, 'P', "TR", 140000),
      record(303195, "Nurda\xC4\x9F\xC4\xB1", 37.1794, 36.7389, 'P', "TR", 40000, {"Nurdagi"}),
      record(311046, "\xC4\xB0slahiye", 37.0258, 36.6316, 'P', "TR", 67000, {"Islahiye"}),
      record(170063, "Aleppo", 36.2021, 37.1343, 'P', "SY", 2100000, {"Halab"}),
      record(169389, "Idlib", 35.9306, 36.6339, 'P', "SY", 165000),
      record(172359, "Jindires", 36.3950, 36.6989, 'P', "SY", 25000),
      record(173579, "Latakia", 35.5317, 35.7901, 'P', "SY", 380000),
  };
}

std::vector<LocationRecord> world_records() {
  return {
      record(1861060, "Japan", 35.6850, 139.7514, 'A', "JP", 126000000, {"Nippon", "Nihon"}),
      record(298795, "Turkey", 39.0000, 35.0000, 'A', "TR", 85000000, {"Turkiye"}),
      record(163843, "Syria", 35.0000, 38.0000, 'A', "SY", 22000000),
      record(3895114, "Chile", -30.0000, -71.0000, 'A', "CL", 19000000),
      record(1643084, "Indonesia", -5.0000, 120.0000, 'A', "ID", 270000000),
      record(3996063, "Mexico", 23.0000, -102.0000, 'A', "MX", 126000000),
      record(3932488, "Peru", -10.0000, -76.0000, 'A', "PE", 33000000),
      record(1814991, "China", 35.0000, 105.0000, 'A', "CN", 1400000000),
      record(130758, "Iran", 32.0000, 53.0000, 'A', "IR", 85000000),
      record(1694008, "Philippines", 13.0000, 122.0000, 'A', "PH", 110000000),
      record(6252001, "United States", 39.7600, -98.5000, 'A', "US", 330000000, {"USA"}),
      record(3658394, "Ecuador", -1.2500, -78.2500, 'A', "EC", 17000000),
      record(1282988, "Nepal", 28.0000, 84.0000, 'A', "NP", 29000000),
      record(1168579, "Pakistan", 30.0000, 70.0000, 'A', "PK", 220000000),
      record(1269750, "India", 22.0000, 79.0000, 'A', "IN", 1380000000),
      record(3175395, "Italy", 42.8333, 12.8333, 'A', "IT", 60000000),
      record(390903, "Greece", 39.0000, 22.0000, 'A', "GR", 10700000),
      record(2186224, "New Zealand", -42.0000, 174.0000, 'A', "NZ", 5000000),
      record(2088628, "Papua New Guinea", -6.0000, 147.0000, 'A', "PG", 9000000),
      record(2017370, "Russia", 60.0000, 100.0000, 'A', "RU", 144000000),
      record(1835848, "Seoul", 37.5660, 126.9784, 'P', "KR", 10000000),
      record(1816670, "Beijing", 39.9075, 116.3972, 'P', "CN", 21000000),
      record(1273294, "Delhi", 28.6519, 77.2315, 'P', "IN", 11000000),
      record(745044, "Istanbul", 41.0138, 28.9497, 'P', "TR", 15000000),
      record(5128581, "New York", 40.7143, -74.0060, 'P', "US", 8800000, {"New York City", "NYC"}),
      record(2643743, "London", 51.5085, -0.1257, 'P', "GB", 8900000),
  };
}

void write_geonames(std::span<const LocationRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) {
    std::string alts;
    for (std::size_t i = 0; i < r.alternate_names.size(); ++i) {
      if (i) alts.push_back(',');
      alts += r.alternate_names[i];
    }
    char lat[32], lon[32];
    std::snprintf(lat, sizeof lat, "%.5f", r.latitude);
    std::snprintf(lon, sizeof lon, "%.5f", r.longitude);
    const char* code = r.feature_class == 'A' ? "PCLI" : "PPL";
    // 19 columns: ... admin codes, population, elevation, dem, timezone, modified
    out << r.geoname_id << '\t' << r.name << '\t' << r.ascii_name << '\t' << alts << '\t' << lat
        << '\t' << lon << '\t' << r.feature_class << '\t' << code << '\t' << r.country_code
        << "\t\t\t\t\t\t" << r.population << "\t\t0\tAsia/Tokyo\t2024-01-01\n";
  }
}

std::vector<RawTweet> source_tweets(std::size_t n, std::uint64_t seed) {
  Rng rng(seed, 0x7372u);
  auto places = turkey_records();
  static const std::vector<std::string_view> kEventTags = {
      "TurkeyEarthquake", "TurkiyeEarthquake", "deprem", "PrayForTurkey", "Syria",
      "earthquake",       "HelpTurkey",        "TurkeySyriaEarthquake"};
  using namespace std::chrono;
  const Timestamp start = sys_days{year{2023} / February / 6} + hours{1} + minutes{17};

  TweetBuilder b{rng, {}, 1, "tr"};
  while (b.out.size() < n) {
    auto ts = start + seconds{static_cast<long>(rng.below(14 * 24 * 3600))};
    double r = rng.unit();
    if (r < 0.08 && !b.out.empty()) {
      const auto& prev = b.out[rng.below(b.out.size())];
      b.emit(prev.content, ts, prev.language, prev.hashtags);
      continue;
    }
    if (r < 0.16) {
      b.emit(std::string(rng.pick(kTurkishLines)) + " #deprem", ts, std::string("tr"),
             std::vector<std::string>{"deprem"});
      continue;
    }
    std::vector<std::string> tags;
    std::string text = compose_tweet(rng, [&] {
      const auto& place = rng.pick(places);
      std::string surface = place.alternate_names.empty() || rng.chance(0.6)
                                ? (is_ascii(place.name) ? place.name : place.alternate_names.front())
                                : place.alternate_names.front();
      surface = vary_case(surface, rng);
      tags.push_back(surface);
      return rng.chance(0.5) ? "#" + surface : surface;
    });
    if (rng.chance(0.5)) text += " #" + std::string(tags.emplace_back(rng.pick(kEventTags)));
    if (rng.chance(0.3)) text += " " + std::string(rng.pick(kEmoji));
    if (rng.chance(0.25)) text += " " + random_url(rng);
    std::optional<std::string> lang;
    if (rng.chance(0.9)) lang = "en";
    b.emit(std::move(text), ts, lang, tags.empty() ? std::nullopt : std::optional(tags));
  }
  return std::move(b.out);
}

std::vector<RawTweet> case_study_tweets(std::size_t n, std::span<const LocationRecord> places,
                                        std::uint64_t seed, const CaseStudyOptions& opts) {
  if (places.empty()) throw Error("case-study tweets need at least one place");
  Rng rng(seed, 0x6373u);
  static const std::vector<std::string_view> kEventTags = {
      "JapanEarthquake", "japanearthquake2024", "NotoEarthquake", "PrayForJapan", "jishin"};

  // Mention weights fall off with distance from the epicenter.
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& p : places) {
    double d = haversine({p.latitude, p.longitude}, kNotoEpicenter);
    acc += 1.0 / std::pow(1.0 + d / 50.0, opts.proximity_bias);
    cumulative.push_back(acc);
  }
  auto pick_place = [&]() -> const LocationRecord& {
    double u = rng.unit() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return places[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), places.size() - 1)];
  };

  using namespace std::chrono;
  const Timestamp quake = sys_days{year{2024} / January / 1} + hours{7} + minutes{10};
  // day offsets relative to the event day, peaked on day 0
  static const std::vector<int> kDayOffsets = {-2, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1,
                                               2, 2, 2, 3, 3, 4, 5, 6, 8};

  TweetBuilder b{rng, {}, 1, "jp"};
  while (b.out.size() < n) {
    int day = rng.pick(kDayOffsets);
    auto ts = day >= 0 ? quake + days{day} + seconds{static_cast<long>(rng.below(16 * 3600))}
                       : floor<days>(quake) + days{day} + seconds{static_cast<long>(rng.below(86400))};
    if (opts.noisy) {
      double r = rng.unit();
      if (r < 0.05 && !b.out.empty()) {
        const auto& prev = b.out[rng.below(b.out.size())];
        b.emit(prev.content, ts, prev.language, prev.hashtags);
        continue;
      }
      if (r < 0.08) {
        b.emit("\xE8\x83\xBD\xE7\x99\xBB\xE5\x8D\x8A\xE5\xB3\xB6\xE5\x9C\xB0\xE9\x9C\x87 #jishin", ts,
               std::string("ja"), std::vector<std::string>{"jishin"});
        continue;
      }
    }
    std::string text = compose_tweet(rng, [&] {
      if (opts.mention_countries && rng.chance(0.1)) return std::string("Japan");
      return opts.vary_case ? vary_case(pick_place().name, rng) : pick_place().name;
    });
    std::vector<std::string> tags;
    std::string tag(rng.pick(kEventTags));
    tags.push_back(tag);
    text += " #" + tag;
    if (opts.noisy && rng.chance(0.3)) text += " " + std::string(rng.pick(kEmoji));
    if (opts.noisy && rng.chance(0.2)) text += " " + random_url(rng);
    b.emit(std::move(text), ts, std::string("en"), tags);
  }
  return std::move(b.out);
}

std::vector<EpicenterRecord> usgs_catalog(std::uint64_t seed) {
  Rng rng(seed, 0x7573u);
  using namespace std::chrono;
  std::vector<EpicenterRecord> out;
  const Timestamp quake = sys_days{year{2024} / January / 1} + hours{7} + minutes{10} + seconds{9};
  out.push_back({quake, kNotoEpicenter.lat, kNotoEpicenter.lon, 7.5, "2024 Noto Peninsula, Japan"});
  for (int i = 0; i < 24; ++i) {
    auto t = quake + minutes{static_cast<long>(5 + rng.below(7 * 24 * 60))};
    double lat = kNotoEpicenter.lat + (rng.unit() - 0.5) * 0.6;
    double lon = kNotoEpicenter.lon + (rng.unit() - 0.5) * 0.9;
    double mag = 4.0 + std::round(rng.unit() * 22.0) / 10.0;
    char place[96];
    std::snprintf(place, sizeof place, "%d km %s of Wajima, Japan", static_cast<int>(5 + rng.below(60)),
                  rng.chance(0.5) ? "NE" : "NNE");
    out.push_back({t, std::round(lat * 1e3) / 1e3, std::round(lon * 1e3) / 1e3, mag, place});
  }
  struct Historic {
    int y;
    unsigned m, d;
    double lat, lon, mag;
    const char* place;
  };
  static const Historic kHistoric[] = {
      {1906, 4, 18, 37.75, -122.55, 7.9, "San Francisco, California, United States"},
      {1923, 9, 1, 35.33, 139.14, 7.9, "Kanto, Japan"},
      {1960, 5, 22, -38.24, -73.05, 9.5, "Valdivia, Chile"},
      {1964, 3, 28, 60.91, -147.34, 9.2, "Prince William Sound, Alaska, United States"},
      {1999, 8, 17, 40.75, 29.86, 7.6, "Izmit, Turkey"},
      {2001, 1, 26, 23.42, 70.23, 7.7, "Gujarat, India"},
      {2004, 12, 26, 3.30, 95.98, 9.1, "off the west coast of northern Sumatra, Indonesia"},
      {2005, 10, 8, 34.54, 73.59, 7.6, "Kashmir, Pakistan"},
      {2008, 5, 12, 31.00, 103.32, 7.9, "eastern Sichuan, China"},
      {2010, 2, 27, -36.12, -72.90, 8.8, "offshore Bio-Bio, Chile"},
      {2011, 3, 11, 38.30, 142.37, 9.1, "near the east coast of Honshu, Japan"},
      {2015, 4, 25, 28.23, 84.73, 7.8, "Gorkha, Nepal"},
      {2016, 4, 16, 0.38, -79.92, 7.8, "Muisne, Ecuador"},
      {2016, 11, 13, -42.74, 173.05, 7.8, "Kaikoura, New Zealand"},
      {2017, 9, 8, 15.02, -93.90, 8.2, "offshore Chiapas, Mexico"},
      {2018, 9, 28, -0.18, 119.84, 7.5, "Palu, Indonesia"},
      {2019, 5, 26, -5.81, -75.27, 8.0, "northern Peru"},
      {2023, 2, 6, 37.23, 37.01, 7.8, "Pazarcik earthquake, Kahramanmaras, Turkey"},
      {2023, 2, 6, 38.02, 37.20, 7.5, "Elbistan, Turkey"},
      {1990, 7, 16, 15.68, 121.17, 7.7, "Luzon, Philippines"},
      {1990, 6, 20, 36.96, 49.41, 7.4, "Manjil-Rudbar, Iran"},
      {1920, 12, 16, 36.60, 105.32, 7.8, "Haiyuan, Ningxia, China"},
      {2000, 6, 4, -4.72, 102.09, 7.9, "southern Sumatra, Atlantis Ridge"},
  };
  for (const auto& h : kHistoric) {
    Timestamp t = sys_days{year{h.y} / month{h.m} / day{h.d}};
    out.push_back({t, h.lat, h.lon, h.mag, h.place});
  }
  // a handful of moderate events that the M7 threshold must exclude
  out.push_back({sys_days{year{2022} / March / 16}, 37.70, 141.58, 7.3, "Fukushima, Japan"});
  out.push_back({sys_days{year{2021} / February / 13}, 37.73, 141.81, 6.9, "Fukushima, Japan"});
  out.push_back({sys_days{year{2020} / October / 30}, 37.90, 26.79, 6.9, "Samos, Greece"});
  return out;
}

void write_usgs_catalog(std::span<const EpicenterRecord> events, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "time,latitude,longitude,depth,mag,magType,nst,gap,dmin,rms,net,id,updated,place,type\n";
  std::size_t id = 1;
  for (const auto& e : events) {
    char num[64];
    std::snprintf(num, sizeof num, "%.4f,%.4f,10.0,%.1f", e.latitude, e.longitude, e.magnitude);
    auto ts = format_timestamp(e.time);
    ts.insert(ts.size() - 1, ".000");
    out << ts << ',' << num << ",mww,,,,,us,fx" << id++ << ',' << ts << ',' << csv::quote(e.place)
        << ",earthquake\n";
  }
}

DeskFixture write_desk_fixture(const std::filesystem::path& dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto abs = fs::absolute(dir);

  auto japan = japan_records(400, seed);
  write_geonames(japan, abs / "japan.tsv");
  write_geonames(turkey_records(), abs / "turkey.tsv");
  write_geonames(world_records(), abs / "world.tsv");
  write_tweet_csv(source_tweets(1400, seed), abs / "source_tweets.csv");
  CaseStudyOptions opts;
  opts.mention_countries = true;
  opts.proximity_bias = 2.0;
  write_tweet_csv(case_study_tweets(1083, japan, seed + 1, opts), abs / "tweets.csv");
  write_usgs_catalog(usgs_catalog(seed), abs / "usgs.csv");

  DeskFixture fx{abs, abs / "pipeline.conf"};
  std::ofstream conf(fx.config);
  conf << "# desk-scale pipeline configuration\n"
       << "seed = " << seed << "\n"
       << "out_dir = " << (abs / "out").string() << "\n"
       << "gazetteer = " << (abs / "japan.tsv").string() << "\n"
       << "country = JP\n"
       << "feature_classes = P\n"
       << "extended_gazetteer = " << (abs / "world.tsv").string() << "\n"
       << "source_gazetteer = " << (abs / "turkey.tsv").string() << "\n"
       << "source_tweets = " << (abs / "source_tweets.csv").string() << "\n"
       << "tweets = " << (abs / "tweets.csv").string() << "\n"
       << "catalog = " << (abs / "usgs.csv").string() << "\n"
       << "corpus_keywords = japanearthquake, japanearthquake2024, notoearthquake\n"
       << "style = realistic\n"
       << "epochs = 40\n";
  return fx;
}

}  // namespace quakeloc::fixtures
