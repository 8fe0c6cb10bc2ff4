public void computeHashCode(String path) {
    ArrayList<Integer> result = new ArrayList<Integer>();
    FileReader rd = new FileReader(path);
    BufferedReader br = new BufferedReader(rd);
    String str = null;
    while ((str = br.readLine()) != null) {
        int hashCode;
        hashCode = str.hashCode();
        result.add(hashCode);
    }
    br.close();
    rd.close();
}
