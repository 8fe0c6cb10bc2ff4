public void getIntegerScore(String path) {
    ArrayList<Integer> result = new ArrayList<Integer>();
    FileReader rd = new FileReader(path);
    BufferedReader br = new BufferedReader(rd);
    String str = null;
    while ((str = br.readLine()) != null) {
        int score;
        score = Integer.parseInt(str);
        result.add(score);
    }
    br.close();
    rd.close();
}
